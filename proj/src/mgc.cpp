#include "sugar/mgc.hpp"
#include "sugar/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace sugar {
namespace {

KernelScales query_scales(const DataMatrix& y, const DataMatrix& x, const ResolvedBandwidth& resolved) {
  if (!resolved.scales.adaptive) return resolved.scales;
  const Index r = resolved.spec.rank;
  if (r > x.rows()) throw std::invalid_argument("mgc_kernel: adaptive rank exceeds reference count");
  Vector sigma(y.rows());
  parallel_for(static_cast<std::size_t>(y.rows()), [&](std::size_t begin, std::size_t end) {
    std::vector<Scalar> dist(static_cast<std::size_t>(x.rows()));
    for (std::size_t ui = begin; ui < end; ++ui) {
      const Index i = static_cast<Index>(ui);
      for (Index j = 0; j < x.rows(); ++j) {
        dist[static_cast<std::size_t>(j)] = (y.values().row(i) - x.values().row(j)).cwiseAbs().sum();
      }
      std::nth_element(dist.begin(), dist.begin() + (r - 1), dist.end());
      sigma(i) = dist[static_cast<std::size_t>(r - 1)];
      if (!(sigma(i) > 0)) {
        throw NumericalError("mgc_kernel: adaptive bandwidth of generated point " + std::to_string(i) + " is zero");
      }
    }
  });
  return KernelScales::per_point(std::move(sigma));
}

}  // namespace

Matrix MgcKernel::dense() const { return affinity * measure.asDiagonal() * affinity.transpose(); }

Vector MgcKernel::row_sums() const {
  const Vector through = measure.cwiseProduct(affinity.transpose() * Vector::Ones(affinity.rows()));
  return affinity * through;
}

Matrix MgcKernel::apply(const Matrix& v) const {
  if (v.rows() != affinity.rows()) throw std::invalid_argument("MgcKernel::apply: row count mismatch");
  const Matrix through = measure.asDiagonal() * (affinity.transpose() * v);
  return affinity * through;
}

MgcKernel mgc_kernel(const DataMatrix& y, const DataMatrix& x, const Vector& measure, const BandwidthSpec& bw) {
  if (y.cols() != x.cols()) throw std::invalid_argument("mgc_kernel: dimension mismatch");
  const ResolvedBandwidth resolved = resolve_bandwidth(x, bw);
  return mgc_kernel(y, query_scales(y, x, resolved), x, resolved.scales, measure);
}

MgcKernel mgc_kernel(const DataMatrix& y, const KernelScales& y_scales, const DataMatrix& x,
                     const KernelScales& x_scales, const Vector& measure) {
  if (y.cols() != x.cols()) throw std::invalid_argument("mgc_kernel: dimension mismatch");
  if (measure.size() != x.rows()) throw std::invalid_argument("mgc_kernel: measure length must equal N");
  for (Index r = 0; r < measure.size(); ++r) {
    if (!(measure(r) > 0) || !std::isfinite(measure(r))) {
      throw std::invalid_argument("mgc_kernel: measure entry " + std::to_string(r) + " is not positive");
    }
  }
  MgcKernel out;
  out.measure = measure;
  out.affinity = y.rows() == 0 ? Matrix(0, x.rows()) : cross_kernel(y, y_scales, x, x_scales);
  return out;
}

namespace {

Vector checked_row_sums(const MgcKernel& khat) {
  const Vector sums = khat.row_sums();
  for (Index i = 0; i < sums.size(); ++i) {
    if (!(sums(i) > 0)) {
      throw NumericalError("diffuse: generated point " + std::to_string(i) +
                           " is disconnected from all references (bandwidth too small)");
    }
  }
  return sums;
}

}  // namespace

Matrix mgc_operator(const MgcKernel& khat) {
  const Vector inv = checked_row_sums(khat).cwiseInverse();
  return inv.asDiagonal() * khat.dense();
}

DataMatrix diffuse(const MgcKernel& khat, const DataMatrix& y0, int t) {
  if (t < 0) throw std::invalid_argument("diffuse: t must be >= 0");
  if (khat.size() != y0.rows()) throw std::invalid_argument("diffuse: kernel size does not match Y0");
  if (t == 0 || y0.rows() == 0) return y0;
  const Vector inv = checked_row_sums(khat).cwiseInverse();
  Matrix y = y0.values();
  for (int step = 0; step < t; ++step) y = inv.asDiagonal() * khat.apply(y);
  return DataMatrix(PointMatrix(y), y0.col_names());
}

DataMatrix diffuse(const MgcKernel& khat, const GeneratedBatch& y0, int t) { return diffuse(khat, y0.points, t); }

Scalar percentile(Vector v, Scalar q) {
  if (v.size() == 0) throw std::invalid_argument("percentile: empty input");
  if (!(q >= 0 && q <= 1)) throw std::invalid_argument("percentile: q must be in [0, 1]");
  std::sort(v.begin(), v.end());
  const Scalar pos = q * static_cast<Scalar>(v.size() - 1);
  const Index lo = static_cast<Index>(std::floor(pos));
  const Index hi = std::min<Index>(lo + 1, v.size() - 1);
  return v(lo) + (pos - static_cast<Scalar>(lo)) * (v(hi) - v(lo));
}

RescaleResult rescale(const DataMatrix& yt, const DataMatrix& x) {
  if (yt.cols() != x.cols()) throw std::invalid_argument("rescale: column count mismatch");
  RescaleResult out;
  if (yt.rows() == 0) {
    out.values = yt;
    return out;
  }
  PointMatrix v = yt.values();
  for (Index j = 0; j < v.cols(); ++j) {
    const Scalar top = v.col(j).maxCoeff();
    if (top == 0) {
      out.unscaled_columns.push_back(j);
      out.warnings.push_back("rescale: column " + std::to_string(j) + " has zero maximum; left unscaled");
      continue;
    }
    v.col(j) *= percentile(x.values().col(j), 0.99) / top;
  }
  out.values = DataMatrix(std::move(v), yt.col_names());
  return out;
}

}  // namespace sugar
