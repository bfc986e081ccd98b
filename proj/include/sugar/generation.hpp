#pragma once

#include "sugar/kernel.hpp"

#include <cstdint>
#include <optional>

namespace sugar {

/// Σ_i = (1/k) Σ_{j ∈ kNN(i)} (x_j − x_i)(x_j − x_i)ᵀ + ε_i I, one per point.
struct LocalCovarianceSet {
  std::vector<Matrix> covariances;
  Index k = 0;
  Vector jitter;  // ε_i actually added to each diagonal

  Index size() const { return static_cast<Index>(covariances.size()); }
};

/// Neighbours by L² distance, self excluded, ties by lower index. With no
/// explicit jitter each point gets ε_i = 1e-12 · trace(Σ_i) / D.
LocalCovarianceSet local_covariances(const DataMatrix& x, Index k, std::optional<Scalar> jitter = std::nullopt);

/// Per-point generation levels with the bounds they were derived from:
///   factor_i = det(I + Σ_i / (2σ_i²))^{1/2}
///   upper_i  = factor_i · (max d̂ − d̂(i))
///   lower_i  = factor_i · (max d̂ − d̂(i)) / (d̂(i) + 1) − 1
///   level_i  = max(0, ⌊(lower_i + upper_i)/2 + 1/2⌋)
struct GenerationPlan {
  std::vector<Index> levels;
  Vector lower;
  Vector upper;
  Index total = 0;
  Scalar max_degree = 0;

  Index size() const { return static_cast<Index>(levels.size()); }
};

GenerationPlan generation_bounds(const DegreeProfile& d, const LocalCovarianceSet& cov, Scalar sigma2);
/// Per-point kernel scale, for adaptive degree bandwidths (σ_i² at point i).
GenerationPlan generation_bounds(const DegreeProfile& d, const LocalCovarianceSet& cov, const Vector& sigma2);

/// det(I + Σ / (2σ²))^{1/2} for a symmetric PSD Σ. Throws NumericalError when
/// Σ has an eigenvalue below −1e-10 · max(1, trace Σ).
Scalar generation_factor(const Matrix& cov, Scalar sigma2);

/// Y₀ with the source index of every row.
struct GeneratedBatch {
  DataMatrix points;
  std::vector<Index> origin;

  Index size() const { return points.rows(); }
};

/// Draws level_i points x_i + L_i z, z ~ N(0, I), L_i the symmetric PSD square
/// root of Σ_i. Point i uses its own generator seeded from (seed, i), so the
/// output does not depend on the order or thread in which points are visited.
GeneratedBatch sample_batch(const DataMatrix& x, const LocalCovarianceSet& cov, const GenerationPlan& plan,
                            std::uint64_t seed);

/// Symmetric PSD square root with negative eigenvalues clipped to zero.
Matrix psd_sqrt(const Matrix& cov);

}  // namespace sugar
