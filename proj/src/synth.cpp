#include "sugar/synth.hpp"
#include "sugar/generation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sugar {
namespace {

Scalar warp(Scalar u, Scalar bias) { return std::pow(u, 1 + bias); }

void check_bias(Scalar bias, const char* who) {
  if (!(bias >= 0) || !std::isfinite(bias)) throw std::invalid_argument(std::string(who) + ": bias must be >= 0");
}

}  // namespace

DataMatrix gen_circle(Index n, Scalar bias, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("gen_circle: n must be >= 3");
  check_bias(bias, "gen_circle");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Scalar> unif(-1.0, 1.0);
  PointMatrix out(n, 2);
  for (Index i = 0; i < n; ++i) {
    const Scalar u = unif(rng);
    const Scalar angle = std::numbers::pi * std::copysign(warp(std::abs(u), bias), u);
    out(i, 0) = std::cos(angle);
    out(i, 1) = std::sin(angle);
  }
  return DataMatrix(std::move(out), {"x", "y"});
}

Vector circle_angles(const DataMatrix& x) {
  if (x.cols() != 2) throw std::invalid_argument("circle_angles: need 2 columns");
  Vector out(x.rows());
  for (Index i = 0; i < x.rows(); ++i) out(i) = std::atan2(x(i, 1), x(i, 0));
  return out;
}

void SwissRollSpec::validate() const {
  if (n < 1) throw std::invalid_argument("SwissRollSpec: n must be >= 1");
  if (!(theta_max > theta_min)) throw std::invalid_argument("SwissRollSpec: empty theta range");
  if (!(h_max > h_min)) throw std::invalid_argument("SwissRollSpec: h range width must be > 0");
  check_bias(theta_bias, "SwissRollSpec");
}

Eigen::Vector3d swiss_roll_point(Scalar theta, Scalar h) {
  return {6 * theta * std::cos(theta), h, 6 * theta * std::sin(theta)};
}

SwissRoll gen_swiss_roll_with_params(const SwissRollSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<Scalar> unif(0.0, 1.0);
  SwissRoll out;
  out.theta.resize(spec.n);
  out.h.resize(spec.n);
  PointMatrix pts(spec.n, 3);
  for (Index i = 0; i < spec.n; ++i) {
    const Scalar theta = spec.theta_min + (spec.theta_max - spec.theta_min) * warp(unif(rng), spec.theta_bias);
    const Scalar h = spec.h_min + (spec.h_max - spec.h_min) * unif(rng);
    out.theta(i) = theta;
    out.h(i) = h;
    pts.row(i) = swiss_roll_point(theta, h).transpose();
  }
  out.points = DataMatrix(std::move(pts), {"x", "h", "z"});
  return out;
}

DataMatrix gen_swiss_roll(const SwissRollSpec& spec) { return gen_swiss_roll_with_params(spec).points; }

LabeledDataset gen_gaussian_mixture(const std::vector<MixtureComponent>& components, Index n, std::uint64_t seed) {
  if (components.empty()) throw std::invalid_argument("gen_gaussian_mixture: no components");
  if (n < 1) throw std::invalid_argument("gen_gaussian_mixture: n must be >= 1");
  const Index dim = components.front().mean.size();
  std::vector<Scalar> weights;
  std::vector<Matrix> roots;
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& comp = components[c];
    if (dim < 1 || comp.mean.size() != dim || comp.covariance.rows() != dim || comp.covariance.cols() != dim) {
      throw std::invalid_argument("gen_gaussian_mixture: component " + std::to_string(c) + " has wrong dimensions");
    }
    if (!(comp.weight > 0)) {
      throw std::invalid_argument("gen_gaussian_mixture: component " + std::to_string(c) + " weight must be > 0");
    }
    try {
      roots.push_back(psd_sqrt(comp.covariance));
    } catch (const std::exception&) {
      throw std::invalid_argument("gen_gaussian_mixture: covariance of component " + std::to_string(c) +
                                  " is not symmetric positive semidefinite");
    }
    weights.push_back(comp.weight);
  }

  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::normal_distribution<Scalar> normal;
  PointMatrix pts(n, dim);
  Labels labels(static_cast<std::size_t>(n));
  Vector z(dim);
  for (Index i = 0; i < n; ++i) {
    const std::size_t c = pick(rng);
    for (Index d = 0; d < dim; ++d) z(d) = normal(rng);
    pts.row(i) = (components[c].mean + roots[c] * z).transpose();
    labels[static_cast<std::size_t>(i)] = components[c].label;
  }
  return LabeledDataset(DataMatrix(std::move(pts)), std::move(labels));
}

DataMatrix gen_sphere(Index n, Scalar bias, std::uint64_t seed, Scalar floor) {
  if (n < 1) throw std::invalid_argument("gen_sphere: n must be >= 1");
  check_bias(bias, "gen_sphere");
  if (!(floor > 0)) throw std::invalid_argument("gen_sphere: floor must be > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Scalar> unif(0.0, 1.0);
  PointMatrix out(n, 3);
  for (Index i = 0; i < n;) {
    const Scalar z = 2 * unif(rng) - 1;
    const Scalar lon = 2 * std::numbers::pi * unif(rng);
    const Scalar accept = (std::pow((1 + z) / 2, 2 * bias) + floor) / (1 + floor);
    if (unif(rng) >= accept) continue;
    const Scalar rho = std::sqrt(std::max<Scalar>(0, 1 - z * z));
    out(i, 0) = rho * std::cos(lon);
    out(i, 1) = rho * std::sin(lon);
    out(i, 2) = z;
    ++i;
  }
  return DataMatrix(std::move(out), {"x", "y", "z"});
}

LabeledDataset gen_rings(const RingsSpec& spec) {
  if (spec.n_major < 1 || spec.n_minor < 1) throw std::invalid_argument("gen_rings: both classes need points");
  if (!(spec.noise >= 0)) throw std::invalid_argument("gen_rings: noise must be >= 0");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<Scalar> angle(-std::numbers::pi, std::numbers::pi);
  std::normal_distribution<Scalar> normal(0.0, 1.0);
  const Index n = spec.n_major + spec.n_minor;
  PointMatrix pts(n, 2);
  Labels labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const bool major = i < spec.n_major;
    const Scalar a = angle(rng);
    const Scalar r = (major ? spec.r_major : spec.r_minor) + spec.noise * normal(rng);
    pts(i, 0) = r * std::cos(a);
    pts(i, 1) = r * std::sin(a);
    labels[static_cast<std::size_t>(i)] = major ? 0 : 1;
  }
  return LabeledDataset(DataMatrix(std::move(pts), {"x", "y"}), std::move(labels));
}

LabeledDataset gen_edge_biased_blobs(const BlobsSpec& spec) {
  if (spec.sizes.empty() || spec.sizes.size() != spec.sd.size()) {
    throw std::invalid_argument("gen_edge_biased_blobs: sizes and sd must be nonempty and of equal length");
  }
  if (!(spec.floor > 0 && spec.floor <= 1)) throw std::invalid_argument("gen_edge_biased_blobs: floor must be in (0, 1]");
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<Scalar> normal(0.0, 1.0);
  std::uniform_real_distribution<Scalar> unif(0.0, 1.0);
  const Index n = std::accumulate(spec.sizes.begin(), spec.sizes.end(), Index{0});
  PointMatrix pts(n, 2);
  Labels labels;
  Index row = 0;
  for (std::size_t c = 0; c < spec.sizes.size(); ++c) {
    if (spec.sizes[c] < 1 || !(spec.sd[c] > 0)) throw std::invalid_argument("gen_edge_biased_blobs: bad component");
    const Scalar cx = static_cast<Scalar>(c) * spec.gap;
    const Scalar cy = static_cast<Scalar>(c % 2);
    for (Index got = 0; got < spec.sizes[c];) {
      const Scalar dx = normal(rng);
      const Scalar dy = normal(rng);
      const Scalar keep = std::clamp((dx * dx + dy * dy) / 4, spec.floor, 1.0);
      if (unif(rng) >= keep) continue;
      pts(row, 0) = cx + spec.sd[c] * dx;
      pts(row, 1) = cy + spec.sd[c] * dy;
      labels.push_back(static_cast<int>(c));
      ++row;
      ++got;
    }
  }
  return LabeledDataset(DataMatrix(std::move(pts), {"x", "y"}), std::move(labels));
}

}  // namespace sugar
