#include "sugar/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sugar {
namespace {

constexpr int kMaxSweeps = 100;

class UnionFind {
 public:
  explicit UnionFind(Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }

  Index find(Index i) {
    while (parent_[static_cast<std::size_t>(i)] != i) {
      auto& p = parent_[static_cast<std::size_t>(i)];
      p = parent_[static_cast<std::size_t>(p)];
      i = p;
    }
    return i;
  }

  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[static_cast<std::size_t>(a)] = b;
  }

  Components components(Index n) {
    Components out;
    out.labels.assign(static_cast<std::size_t>(n), -1);
    std::vector<Index> root_label(static_cast<std::size_t>(n), -1);
    for (Index i = 0; i < n; ++i) {
      const Index r = find(i);
      auto& label = root_label[static_cast<std::size_t>(r)];
      if (label < 0) label = out.count++;
      out.labels[static_cast<std::size_t>(i)] = label;
    }
    return out;
  }

 private:
  std::vector<Index> parent_;
};

void fix_signs(Matrix& v) {
  for (Index k = 0; k < v.cols(); ++k) {
    Index arg = 0;
    for (Index i = 1; i < v.rows(); ++i) {
      if (std::abs(v(i, k)) > std::abs(v(arg, k)) + 1e-12) arg = i;
    }
    if (v(arg, k) < 0) v.col(k) = -v.col(k);
  }
}

}  // namespace

EigenDecomposition sym_eigendecomp(const Matrix& s) {
  if (s.rows() != s.cols()) throw std::invalid_argument("sym_eigendecomp: matrix must be square");
  const Index n = s.rows();
  const Scalar scale = n == 0 ? 0.0 : s.cwiseAbs().maxCoeff();
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max<Scalar>(1.0, scale)) {
    throw std::invalid_argument("sym_eigendecomp: matrix is not symmetric");
  }

  Matrix a = (s + s.transpose()) / 2;
  Matrix v = Matrix::Identity(n, n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    Scalar off = 0;
    for (Index q = 1; q < n; ++q) {
      for (Index p = 0; p < q; ++p) off += a(p, q) * a(p, q);
    }
    if (off == 0 || std::sqrt(off) <= std::numeric_limits<Scalar>::min()) break;

    for (Index q = 1; q < n; ++q) {
      for (Index p = 0; p < q; ++p) {
        const Scalar apq = a(p, q);
        const Scalar app = a(p, p);
        const Scalar aqq = a(q, q);
        // Once the off-diagonal entry no longer perturbs either diagonal entry
        // it is rounded to zero.
        const Scalar g = 100 * std::abs(apq);
        if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0;
          continue;
        }
        if (apq == 0) continue;

        const Scalar theta = (aqq - app) / (2 * apq);
        const Scalar t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const Scalar c = 1 / std::sqrt(t * t + 1);
        const Scalar sn = t * c;

        for (Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0;
        for (Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
    if (sweep == kMaxSweeps - 1) throw NumericalError("sym_eigendecomp: Jacobi sweeps did not converge");
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.eigenvectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  fix_signs(out.eigenvectors);
  return out;
}

Embedding diffusion_map(const KernelMatrix& k, Index m, int t) {
  if (!k.square) throw std::invalid_argument("diffusion_map: kernel must be square");
  const Index n = k.rows();
  if (m < 1 || m >= n) throw std::invalid_argument("diffusion_map: need 1 <= m < N");
  if (t < 0) throw std::invalid_argument("diffusion_map: t must be >= 0");

  const DegreeProfile profile = degrees(k);
  const Vector inv_sqrt_d = profile.degrees.cwiseSqrt().cwiseInverse();
  const Matrix sym = inv_sqrt_d.asDiagonal() * k.values * inv_sqrt_d.asDiagonal();
  const EigenDecomposition eig = sym_eigendecomp((sym + sym.transpose()) / 2);

  // Right eigenvectors of P are D^{-1/2} v; the sqrt(vol) factor makes them
  // orthonormal under the stationary distribution d / vol.
  const Scalar vol = profile.degrees.sum();
  Embedding out;
  out.eigenvalues = eig.eigenvalues.segment(1, m);
  out.coords.resize(n, m);
  for (Index c = 0; c < m; ++c) {
    const Scalar lambda = eig.eigenvalues(c + 1);
    const Scalar weight = std::pow(lambda, t) * std::sqrt(vol);
    out.coords.col(c) = weight * inv_sqrt_d.cwiseProduct(eig.eigenvectors.col(c + 1));
  }
  return out;
}

Components connected_components(const KernelMatrix& k, Scalar threshold) {
  if (!k.square) throw std::invalid_argument("connected_components: kernel must be square");
  const Index n = k.rows();
  UnionFind uf(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (k.values(i, j) >= threshold || k.values(j, i) >= threshold) uf.unite(i, j);
    }
  }
  return uf.components(n);
}

Components connected_components(const DataMatrix& x, const BandwidthSpec& bw, Scalar threshold) {
  const ResolvedBandwidth resolved = resolve_bandwidth(x, bw);
  const Index n = x.rows();
  UnionFind uf(n);
  // One row at a time keeps memory at O(N).
  for (Index i = 0; i < n; ++i) {
    const DataMatrix row = x.select_rows({i});
    const Matrix k = cross_kernel(row, resolved.scales.select({i}), x, resolved.scales);
    for (Index j = i + 1; j < n; ++j) {
      if (k(0, j) >= threshold) uf.unite(i, j);
    }
  }
  return uf.components(n);
}

Vector laplacian_spectrum(const KernelMatrix& k, Index m) {
  if (!k.square) throw std::invalid_argument("laplacian_spectrum: kernel must be square");
  if (m < 1 || m > k.rows()) throw std::invalid_argument("laplacian_spectrum: need 1 <= m <= N");
  const Vector d = k.values.rowwise().sum();
  const Matrix laplacian = Matrix(d.asDiagonal()) - k.values;
  const EigenDecomposition eig = sym_eigendecomp((laplacian + laplacian.transpose()) / 2);
  return eig.eigenvalues.reverse().head(m);
}

}  // namespace sugar
