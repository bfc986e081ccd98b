#pragma once

#include "sugar/dataset.hpp"

#include <string>
#include <string_view>

namespace sugar {

/// How a Gaussian kernel's scale is chosen.
///   fixed(σ²)      every pair uses the given σ²
///   maxmin(C)      σ² = C · max_j min_{i≠j} ‖x_i − x_j‖², C in [2, 3]
///   adaptive(r)    σ_i = L¹ distance to the r-th nearest neighbour, pair scale σ_iσ_j
struct BandwidthSpec {
  enum class Mode { fixed, maxmin, adaptive };

  Mode mode = Mode::maxmin;
  Scalar value = 2.0;  // σ² for fixed, C for maxmin
  Index rank = 10;     // adaptive only

  static BandwidthSpec fixed(Scalar sigma2);
  static BandwidthSpec maxmin(Scalar c = 2.0);
  static BandwidthSpec adaptive(Index r = 10);

  /// Accepts "fixed:<σ²>", "maxmin:<C>", "adaptive:<r>".
  static BandwidthSpec parse(std::string_view text);
  std::string to_string() const;

  /// Throws std::invalid_argument when the parameters are out of range.
  void validate() const;

  bool operator==(const BandwidthSpec&) const = default;
};

/// Per-point scales on one side of a kernel. Scalar modes keep σ² exactly so
/// that fixed kernels never see a rounded sqrt(σ²)².
struct KernelScales {
  bool adaptive = false;
  Scalar sigma2 = 0.0;
  Vector sigma;

  static KernelScales uniform(Scalar sigma2);
  static KernelScales per_point(Vector sigma);

  /// The σ² that governs point i: σ² or σ_i².
  Scalar sigma2_at(Index i) const { return adaptive ? sigma(i) * sigma(i) : sigma2; }
  Vector sigma2_vector(Index n) const;
  /// Picks the scales of the listed points (adaptive), or copies (scalar).
  KernelScales select(const std::vector<Index>& idx) const;
};

/// A bandwidth spec together with the scales it resolved to on a point set.
struct ResolvedBandwidth {
  BandwidthSpec spec;
  KernelScales scales;
};

/// Resolves `spec` against the points of x (self excluded for neighbour ranks).
ResolvedBandwidth resolve_bandwidth(const DataMatrix& x, const BandwidthSpec& spec);

/// Entry (i, j) = ‖a_i − b_j‖². Works on any pair of Eigen row-major or
/// column-major expressions with matching column counts.
template <typename DerivedA, typename DerivedB>
Matrix pairwise_sq_dist(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("pairwise_sq_dist: dimension mismatch");
  Matrix out(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.rows(); ++j) {
      Scalar acc = 0;
      for (Index d = 0; d < a.cols(); ++d) {
        const Scalar diff = a(i, d) - b(j, d);
        acc += diff * diff;
      }
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix pairwise_sq_dist(const DataMatrix& a, const DataMatrix& b);

/// C times the largest nearest-neighbour squared distance.
Scalar maxmin_bandwidth(const DataMatrix& x, Scalar c);

/// σ_i = L¹ distance from x_i to its r-th nearest neighbour (self excluded).
/// Throws NumericalError naming the first point whose σ_i is zero.
Vector adaptive_bandwidths(const DataMatrix& x, Index r);

/// Dense Gaussian affinity matrix.
struct KernelMatrix {
  Matrix values;
  BandwidthSpec spec;
  KernelScales row_scales;
  KernelScales col_scales;
  bool square = false;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
};

/// Square kernel over x with the bandwidth resolved on x.
KernelMatrix gaussian_kernel(const DataMatrix& x, const BandwidthSpec& bw);

/// Rectangular kernel between query points a and reference points b. The
/// bandwidth is resolved on b; adaptive query scales are the L¹ distance of
/// a_i to its r-th nearest reference. When a and b hold identical values the
/// square kernel is returned.
KernelMatrix gaussian_kernel(const DataMatrix& a, const DataMatrix& b, const BandwidthSpec& bw);

/// Entry (i, j) = exp(−‖a_i − b_j‖² / (2 s_ij)) with s_ij = σ² or σ_iσ_j taken
/// from explicit per-side scales.
Matrix cross_kernel(const DataMatrix& a, const KernelScales& a_scales, const DataMatrix& b,
                    const KernelScales& b_scales);

/// Degrees d̂(i), sparsities ŝ(i) = 1/d̂(i) and the MGC measure (ŝ by default).
struct DegreeProfile {
  Vector degrees;
  Vector sparsities;
  Vector measure;

  Index size() const { return degrees.size(); }
};

/// Builds a profile from raw row sums. Throws NumericalError on a zero sum.
DegreeProfile make_degree_profile(Vector degrees);

DegreeProfile degrees(const KernelMatrix& k);

/// Same result as degrees(gaussian_kernel(x, bw)) bit for bit, without
/// materialising the N x N kernel.
DegreeProfile degree_profile(const DataMatrix& x, const ResolvedBandwidth& bw);
DegreeProfile degree_profile(const DataMatrix& x, const BandwidthSpec& bw);

/// Row-stochastic P = D⁻¹K with a diffusion time.
struct DiffusionOperator {
  Matrix values;
  int time = 0;
};

DiffusionOperator row_normalize(const KernelMatrix& k);

}  // namespace sugar
