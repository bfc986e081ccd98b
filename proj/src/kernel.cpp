#include "sugar/kernel.hpp"
#include "sugar/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace sugar {
namespace {

template <typename RowA, typename RowB>
Scalar sq_dist(const RowA& a, const RowB& b) {
  Scalar acc = 0;
  for (Index d = 0; d < a.size(); ++d) {
    const Scalar diff = a(d) - b(d);
    acc += diff * diff;
  }
  return acc;
}

template <typename RowA, typename RowB>
Scalar l1_dist(const RowA& a, const RowB& b) {
  Scalar acc = 0;
  for (Index d = 0; d < a.size(); ++d) acc += std::abs(a(d) - b(d));
  return acc;
}

// r-th smallest L1 distance from `p` to the rows of `ref`, skipping row `self`
// (pass -1 to skip nothing).
template <typename Row>
Scalar rth_l1_distance(const Row& p, const PointMatrix& ref, Index self, Index r, std::vector<Scalar>& scratch) {
  scratch.clear();
  for (Index j = 0; j < ref.rows(); ++j) {
    if (j == self) continue;
    scratch.push_back(l1_dist(p, ref.row(j)));
  }
  const auto nth = scratch.begin() + (r - 1);
  std::nth_element(scratch.begin(), nth, scratch.end());
  return *nth;
}

// One kernel row; shared by the dense and streaming paths so both sum the
// same values in the same order.
void kernel_row(const PointMatrix& a, Index i, const KernelScales& a_scales, const PointMatrix& b,
                const KernelScales& b_scales, Scalar* out) {
  const auto ai = a.row(i);
  for (Index j = 0; j < b.rows(); ++j) {
    const Scalar scale = a_scales.adaptive ? a_scales.sigma(i) * b_scales.sigma(j) : a_scales.sigma2;
    out[j] = std::exp(-sq_dist(ai, b.row(j)) / (2 * scale));
  }
}

void check_scales(const KernelScales& s, Index n, const char* side) {
  if (s.adaptive) {
    if (s.sigma.size() != n) throw std::invalid_argument(std::string("kernel: ") + side + " scale count mismatch");
    for (Index i = 0; i < n; ++i) {
      if (!(s.sigma(i) > 0)) {
        throw NumericalError(std::string("kernel: zero bandwidth at ") + side + " point " + std::to_string(i));
      }
    }
  } else if (!(s.sigma2 > 0) || !std::isfinite(s.sigma2)) {
    throw NumericalError("kernel: bandwidth must be positive and finite");
  }
}

Scalar sum_row(const Scalar* row, Index n) {
  Scalar acc = 0;
  for (Index j = 0; j < n; ++j) acc += row[j];
  return acc;
}

}  // namespace

BandwidthSpec BandwidthSpec::fixed(Scalar sigma2) {
  BandwidthSpec s{Mode::fixed, sigma2, 0};
  s.validate();
  return s;
}

BandwidthSpec BandwidthSpec::maxmin(Scalar c) {
  BandwidthSpec s{Mode::maxmin, c, 0};
  s.validate();
  return s;
}

BandwidthSpec BandwidthSpec::adaptive(Index r) {
  BandwidthSpec s{Mode::adaptive, 0.0, r};
  s.validate();
  return s;
}

void BandwidthSpec::validate() const {
  switch (mode) {
    case Mode::fixed:
      if (!(value > 0) || !std::isfinite(value)) throw std::invalid_argument("fixed bandwidth needs σ² > 0");
      break;
    case Mode::maxmin:
      if (!(value >= 2.0 && value <= 3.0)) throw std::invalid_argument("maxmin bandwidth needs C in [2, 3]");
      break;
    case Mode::adaptive:
      if (rank < 1) throw std::invalid_argument("adaptive bandwidth needs r >= 1");
      break;
  }
}

BandwidthSpec BandwidthSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("bandwidth '" + std::string(text) + "' must look like mode:value");
  }
  const std::string_view mode = text.substr(0, colon);
  const std::string arg(text.substr(colon + 1));
  auto number = [&](double& v) {
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) {
      throw std::invalid_argument("bandwidth '" + std::string(text) + "': bad number");
    }
  };
  double v = 0;
  number(v);
  if (mode == "fixed") return fixed(v);
  if (mode == "maxmin") return maxmin(v);
  if (mode == "adaptive") {
    if (v != std::floor(v)) throw std::invalid_argument("adaptive bandwidth rank must be an integer");
    return adaptive(static_cast<Index>(v));
  }
  throw std::invalid_argument("unknown bandwidth mode '" + std::string(mode) + "'");
}

std::string BandwidthSpec::to_string() const {
  std::ostringstream out;
  out.precision(17);
  switch (mode) {
    case Mode::fixed: out << "fixed:" << value; break;
    case Mode::maxmin: out << "maxmin:" << value; break;
    case Mode::adaptive: out << "adaptive:" << rank; break;
  }
  return out.str();
}

KernelScales KernelScales::uniform(Scalar sigma2) {
  KernelScales s;
  s.sigma2 = sigma2;
  return s;
}

KernelScales KernelScales::per_point(Vector sigma) {
  KernelScales s;
  s.adaptive = true;
  s.sigma = std::move(sigma);
  return s;
}

Vector KernelScales::sigma2_vector(Index n) const {
  if (adaptive) return sigma.array().square().matrix();
  return Vector::Constant(n, sigma2);
}

KernelScales KernelScales::select(const std::vector<Index>& idx) const {
  if (!adaptive) return *this;
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out(static_cast<Index>(k)) = sigma(idx[k]);
  return per_point(std::move(out));
}

Matrix pairwise_sq_dist(const DataMatrix& a, const DataMatrix& b) { return pairwise_sq_dist(a.values(), b.values()); }

Scalar maxmin_bandwidth(const DataMatrix& x, Scalar c) {
  if (x.rows() < 2) throw std::invalid_argument("maxmin_bandwidth needs at least two points");
  const auto& v = x.values();
  const std::size_t n = static_cast<std::size_t>(x.rows());
  std::vector<Scalar> nearest(n, std::numeric_limits<Scalar>::infinity());
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (Index j = 0; j < x.rows(); ++j) {
        if (j == static_cast<Index>(i)) continue;
        best = std::min(best, sq_dist(v.row(static_cast<Index>(i)), v.row(j)));
      }
      nearest[i] = best;
    }
  });
  return c * *std::max_element(nearest.begin(), nearest.end());
}

Vector adaptive_bandwidths(const DataMatrix& x, Index r) {
  if (r < 1 || r >= x.rows()) {
    throw std::invalid_argument("adaptive_bandwidths: rank " + std::to_string(r) + " outside [1, " +
                                std::to_string(x.rows() - 1) + "]");
  }
  Vector sigma(x.rows());
  parallel_for(static_cast<std::size_t>(x.rows()), [&](std::size_t begin, std::size_t end) {
    std::vector<Scalar> scratch;
    for (std::size_t i = begin; i < end; ++i) {
      const Index ii = static_cast<Index>(i);
      sigma(ii) = rth_l1_distance(x.values().row(ii), x.values(), ii, r, scratch);
    }
  });
  for (Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma(i) > 0)) {
      throw NumericalError("adaptive_bandwidths: point " + std::to_string(i) +
                           " has zero bandwidth (duplicated points within its " + std::to_string(r) +
                           " nearest neighbours)");
    }
  }
  return sigma;
}

ResolvedBandwidth resolve_bandwidth(const DataMatrix& x, const BandwidthSpec& spec) {
  spec.validate();
  switch (spec.mode) {
    case BandwidthSpec::Mode::fixed:
      return {spec, KernelScales::uniform(spec.value)};
    case BandwidthSpec::Mode::maxmin: {
      const Scalar s2 = maxmin_bandwidth(x, spec.value);
      if (!(s2 > 0)) throw NumericalError("maxmin bandwidth is zero: every point has an exact duplicate");
      return {spec, KernelScales::uniform(s2)};
    }
    case BandwidthSpec::Mode::adaptive:
      return {spec, KernelScales::per_point(adaptive_bandwidths(x, spec.rank))};
  }
  throw std::logic_error("unreachable");
}

Matrix cross_kernel(const DataMatrix& a, const KernelScales& a_scales, const DataMatrix& b,
                    const KernelScales& b_scales) {
  if (a.cols() != b.cols()) throw std::invalid_argument("gaussian kernel: dimension mismatch");
  check_scales(a_scales, a.rows(), "query");
  check_scales(b_scales, b.rows(), "reference");
  if (a_scales.adaptive != b_scales.adaptive) {
    throw std::invalid_argument("gaussian kernel: both sides must use the same bandwidth kind");
  }
  // Row-major so each worker writes a contiguous block.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(a.rows(), b.rows());
  parallel_for(static_cast<std::size_t>(a.rows()), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      kernel_row(a.values(), static_cast<Index>(i), a_scales, b.values(), b_scales,
                 out.data() + static_cast<Index>(i) * out.cols());
    }
  });
  return out;
}

KernelMatrix gaussian_kernel(const DataMatrix& x, const BandwidthSpec& bw) {
  const ResolvedBandwidth resolved = resolve_bandwidth(x, bw);
  KernelMatrix k;
  k.values = cross_kernel(x, resolved.scales, x, resolved.scales);
  k.spec = bw;
  k.row_scales = resolved.scales;
  k.col_scales = resolved.scales;
  k.square = true;
  return k;
}

KernelMatrix gaussian_kernel(const DataMatrix& a, const DataMatrix& b, const BandwidthSpec& bw) {
  if (a.cols() != b.cols()) throw std::invalid_argument("gaussian kernel: dimension mismatch");
  if (&a == &b || (a.rows() == b.rows() && a.values() == b.values())) return gaussian_kernel(b, bw);
  const ResolvedBandwidth resolved = resolve_bandwidth(b, bw);
  KernelScales query = resolved.scales;
  if (resolved.scales.adaptive) {
    if (bw.rank > b.rows()) throw std::invalid_argument("adaptive rank exceeds reference count");
    Vector sigma(a.rows());
    std::vector<Scalar> scratch;
    for (Index i = 0; i < a.rows(); ++i) {
      sigma(i) = rth_l1_distance(a.values().row(i), b.values(), -1, bw.rank, scratch);
    }
    query = KernelScales::per_point(std::move(sigma));
  }
  KernelMatrix k;
  k.values = cross_kernel(a, query, b, resolved.scales);
  k.spec = bw;
  k.row_scales = std::move(query);
  k.col_scales = resolved.scales;
  k.square = false;
  return k;
}

DegreeProfile make_degree_profile(Vector degrees) {
  for (Index i = 0; i < degrees.size(); ++i) {
    if (!(degrees(i) > 0)) {
      throw NumericalError("degree of point " + std::to_string(i) + " is zero (isolated under the kernel)");
    }
  }
  DegreeProfile p;
  p.sparsities = degrees.cwiseInverse();
  p.measure = p.sparsities;
  p.degrees = std::move(degrees);
  return p;
}

DegreeProfile degrees(const KernelMatrix& k) {
  if (!k.square) throw std::invalid_argument("degrees: kernel must be square");
  Vector d(k.rows());
  // Copy each row into contiguous storage and sum left to right, matching
  // the streaming path exactly.
  std::vector<Scalar> row(static_cast<std::size_t>(k.cols()));
  for (Index i = 0; i < k.rows(); ++i) {
    for (Index j = 0; j < k.cols(); ++j) row[static_cast<std::size_t>(j)] = k.values(i, j);
    d(i) = sum_row(row.data(), k.cols());
  }
  return make_degree_profile(std::move(d));
}

DegreeProfile degree_profile(const DataMatrix& x, const ResolvedBandwidth& bw) {
  check_scales(bw.scales, x.rows(), "query");
  Vector d(x.rows());
  parallel_for(static_cast<std::size_t>(x.rows()), [&](std::size_t begin, std::size_t end) {
    std::vector<Scalar> row(static_cast<std::size_t>(x.rows()));
    for (std::size_t i = begin; i < end; ++i) {
      kernel_row(x.values(), static_cast<Index>(i), bw.scales, x.values(), bw.scales, row.data());
      d(static_cast<Index>(i)) = sum_row(row.data(), x.rows());
    }
  });
  return make_degree_profile(std::move(d));
}

DegreeProfile degree_profile(const DataMatrix& x, const BandwidthSpec& bw) {
  return degree_profile(x, resolve_bandwidth(x, bw));
}

DiffusionOperator row_normalize(const KernelMatrix& k) {
  if (!k.square) throw std::invalid_argument("row_normalize: kernel must be square");
  const DegreeProfile p = degrees(k);
  DiffusionOperator op;
  op.values = p.sparsities.asDiagonal() * k.values;
  op.time = 0;
  return op;
}

}  // namespace sugar
