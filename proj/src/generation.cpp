#include "sugar/generation.hpp"
#include "sugar/parallel.hpp"
#include "sugar/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sugar {
namespace {

Scalar psd_tolerance(const Matrix& cov) { return 1e-10 * std::max<Scalar>(1.0, std::abs(cov.trace())); }

EigenDecomposition checked_eigen(const Matrix& cov, Index i) {
  const EigenDecomposition eig = sym_eigendecomp(cov);
  if (eig.eigenvalues.size() > 0 && eig.eigenvalues.minCoeff() < -psd_tolerance(cov)) {
    throw NumericalError("covariance " + (i >= 0 ? "of point " + std::to_string(i) + " " : std::string()) +
                         "is not positive semidefinite (min eigenvalue " +
                         std::to_string(eig.eigenvalues.minCoeff()) + ")");
  }
  return eig;
}

std::vector<Index> nearest_l2(const PointMatrix& v, Index i, Index k) {
  std::vector<std::pair<Scalar, Index>> dist;
  dist.reserve(static_cast<std::size_t>(v.rows() - 1));
  for (Index j = 0; j < v.rows(); ++j) {
    if (j == i) continue;
    dist.emplace_back((v.row(j) - v.row(i)).squaredNorm(), j);
  }
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(k));
  for (Index c = 0; c < k; ++c) out.push_back(dist[static_cast<std::size_t>(c)].second);
  return out;
}

}  // namespace

LocalCovarianceSet local_covariances(const DataMatrix& x, Index k, std::optional<Scalar> jitter) {
  if (k < 1 || k >= x.rows()) {
    throw std::invalid_argument("local_covariances: k = " + std::to_string(k) + " outside [1, " +
                                std::to_string(x.rows() - 1) + "]");
  }
  if (jitter && !(*jitter >= 0)) throw std::invalid_argument("local_covariances: jitter must be >= 0");

  const Index n = x.rows();
  const Index dim = x.cols();
  LocalCovarianceSet out;
  out.k = k;
  out.covariances.resize(static_cast<std::size_t>(n));
  out.jitter.resize(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
    for (std::size_t ui = begin; ui < end; ++ui) {
      const Index i = static_cast<Index>(ui);
      Matrix cov = Matrix::Zero(dim, dim);
      for (Index j : nearest_l2(x.values(), i, k)) {
        const Vector diff = (x.values().row(j) - x.values().row(i)).transpose();
        cov.noalias() += diff * diff.transpose();
      }
      cov /= static_cast<Scalar>(k);
      const Scalar eps = jitter ? *jitter : 1e-12 * cov.trace() / static_cast<Scalar>(dim);
      cov.diagonal().array() += eps;
      out.jitter(i) = eps;
      out.covariances[ui] = std::move(cov);
    }
  });
  return out;
}

Scalar generation_factor(const Matrix& cov, Scalar sigma2) {
  if (!(sigma2 > 0)) throw std::invalid_argument("generation_factor: σ² must be positive");
  const EigenDecomposition eig = checked_eigen(cov, -1);
  // Product of per-eigenvalue square roots avoids forming a tiny or huge det.
  Scalar factor = 1;
  for (Index d = 0; d < eig.eigenvalues.size(); ++d) {
    factor *= std::sqrt(1 + std::max<Scalar>(eig.eigenvalues(d), 0) / (2 * sigma2));
  }
  return factor;
}

GenerationPlan generation_bounds(const DegreeProfile& d, const LocalCovarianceSet& cov, Scalar sigma2) {
  return generation_bounds(d, cov, Vector::Constant(d.size(), sigma2));
}

GenerationPlan generation_bounds(const DegreeProfile& d, const LocalCovarianceSet& cov, const Vector& sigma2) {
  const Index n = d.size();
  if (cov.size() != n || sigma2.size() != n) {
    throw std::invalid_argument("generation_bounds: degree, covariance and bandwidth counts differ");
  }
  GenerationPlan plan;
  plan.levels.resize(static_cast<std::size_t>(n));
  plan.lower.resize(n);
  plan.upper.resize(n);
  plan.max_degree = n ? d.degrees.maxCoeff() : 0.0;
  for (Index i = 0; i < n; ++i) {
    Scalar factor = 0;
    try {
      factor = generation_factor(cov.covariances[static_cast<std::size_t>(i)], sigma2(i));
    } catch (const NumericalError&) {
      throw NumericalError("generation_bounds: covariance of point " + std::to_string(i) +
                           " is not positive semidefinite");
    }
    const Scalar gap = plan.max_degree - d.degrees(i);
    plan.upper(i) = factor * gap;
    plan.lower(i) = factor * gap / (d.degrees(i) + 1) - 1;
    const Scalar mid = std::floor((plan.lower(i) + plan.upper(i)) / 2 + 0.5);
    plan.levels[static_cast<std::size_t>(i)] = mid > 0 ? static_cast<Index>(mid) : 0;
  }
  plan.total = std::accumulate(plan.levels.begin(), plan.levels.end(), Index{0});
  return plan;
}

Matrix psd_sqrt(const Matrix& cov) {
  const EigenDecomposition eig = checked_eigen(cov, -1);
  const Vector root = eig.eigenvalues.cwiseMax(0).cwiseSqrt();
  return eig.eigenvectors * root.asDiagonal() * eig.eigenvectors.transpose();
}

GeneratedBatch sample_batch(const DataMatrix& x, const LocalCovarianceSet& cov, const GenerationPlan& plan,
                            std::uint64_t seed) {
  const Index n = x.rows();
  if (cov.size() != n || plan.size() != n) {
    throw std::invalid_argument("sample_batch: point, covariance and plan counts differ");
  }
  std::vector<Index> offset(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i) {
    offset[static_cast<std::size_t>(i) + 1] = offset[static_cast<std::size_t>(i)] + plan.levels[static_cast<std::size_t>(i)];
  }
  const Index total = offset.back();
  GeneratedBatch batch;
  batch.origin.resize(static_cast<std::size_t>(total));
  if (total == 0) {
    batch.points = DataMatrix::empty(x.cols(), x.col_names());
    return batch;
  }
  PointMatrix out(total, x.cols());
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
    for (std::size_t ui = begin; ui < end; ++ui) {
      const Index level = plan.levels[ui];
      if (level == 0) continue;
      const Index i = static_cast<Index>(ui);
      Matrix root;
      try {
        root = psd_sqrt(cov.covariances[ui]);
      } catch (const NumericalError&) {
        throw NumericalError("sample_batch: cannot take the square root of the covariance of point " +
                             std::to_string(i));
      }
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(ui), static_cast<std::uint32_t>(ui >> 32)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<Scalar> normal;
      Vector z(x.cols());
      for (Index l = 0; l < level; ++l) {
        for (Index d = 0; d < z.size(); ++d) z(d) = normal(rng);
        const Index row = offset[ui] + l;
        out.row(row) = x.values().row(i) + (root * z).transpose();
        batch.origin[static_cast<std::size_t>(row)] = i;
      }
    }
  });
  batch.points = DataMatrix(std::move(out), x.col_names());
  return batch;
}

}  // namespace sugar
