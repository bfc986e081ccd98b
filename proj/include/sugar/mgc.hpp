#pragma once

#include "sugar/generation.hpp"

#include <string>

namespace sugar {

/// Sparsity-measured MGC kernel K̂ = A·diag(μ)·Aᵀ with A(i, r) = K(y_i, x_r).
/// Kept in factored form: K̂ is M x M and M can be far larger than N, while
/// every product with K̂ only needs A and μ.
struct MgcKernel {
  Matrix affinity;  // A, M x N
  Vector measure;   // μ, length N

  Index size() const { return affinity.rows(); }
  Index references() const { return affinity.cols(); }

  /// Materialised K̂. O(M² N); meant for small M.
  Matrix dense() const;
  /// K̂·1 without forming K̂.
  Vector row_sums() const;
  /// K̂·v without forming K̂.
  Matrix apply(const Matrix& v) const;
};

/// Scales of y resolved against x: σ² for scalar modes, the L¹ distance from
/// y_i to its r-th nearest reference for adaptive ones.
MgcKernel mgc_kernel(const DataMatrix& y, const DataMatrix& x, const Vector& measure, const BandwidthSpec& bw);

/// Explicit scales on both sides, e.g. generated points inheriting σ of their origin.
MgcKernel mgc_kernel(const DataMatrix& y, const KernelScales& y_scales, const DataMatrix& x,
                     const KernelScales& x_scales, const Vector& measure);

/// P̂ = diag(1/K̂·1)·K̂, dense. Throws NumericalError on a zero row sum.
Matrix mgc_operator(const MgcKernel& khat);

/// Y_t = P̂^t Y₀. t = 0 returns Y₀ unchanged.
DataMatrix diffuse(const MgcKernel& khat, const DataMatrix& y0, int t);
DataMatrix diffuse(const MgcKernel& khat, const GeneratedBatch& y0, int t);

/// Percentile q in [0, 1] by linear interpolation between order statistics.
Scalar percentile(Vector v, Scalar q);

struct RescaleResult {
  DataMatrix values;
  std::vector<Index> unscaled_columns;  // columns whose max was zero
  std::vector<std::string> warnings;
};

/// Y[·, j] = Y_t[·, j] · percentile(X[·, j], 0.99) / max Y_t[·, j].
RescaleResult rescale(const DataMatrix& yt, const DataMatrix& x);

}  // namespace sugar
