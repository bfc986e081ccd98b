#pragma once

#include "sugar/dataset.hpp"

#include <cstdint>
#include <numbers>

namespace sugar {

/// n points on the unit circle with angle π·sign(u)·|u|^(1+bias), u ~ U[−1, 1].
/// Density peaks at angle 0 for bias > 0; bias = 0 is uniform.
DataMatrix gen_circle(Index n, Scalar bias, std::uint64_t seed);

/// Angle in (−π, π] of each row of a 2-D point set.
Vector circle_angles(const DataMatrix& x);

struct SwissRollSpec {
  Index n = 600;
  Scalar theta_min = 1.5 * std::numbers::pi;
  Scalar theta_max = 4.5 * std::numbers::pi;
  /// θ = θ_min + (θ_max − θ_min)·u^(1+bias), u ~ U[0, 1]; density decreases with θ.
  Scalar theta_bias = 1.0;
  Scalar h_min = 0.0;
  Scalar h_max = 20.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Swiss roll rows (6θ cos θ, h, 6θ sin θ) together with their θ and h.
struct SwissRoll {
  DataMatrix points;
  Vector theta;
  Vector h;
};

SwissRoll gen_swiss_roll_with_params(const SwissRollSpec& spec);
DataMatrix gen_swiss_roll(const SwissRollSpec& spec);

/// Point of the roll at a given (θ, h).
Eigen::Vector3d swiss_roll_point(Scalar theta, Scalar h);

struct MixtureComponent {
  Vector mean;
  Matrix covariance;
  Scalar weight = 1.0;
  int label = 0;
};

/// n draws: component chosen by weight, point mean + L z with L the PSD root of
/// the covariance. Labels are the component labels, which must cover [0, C).
LabeledDataset gen_gaussian_mixture(const std::vector<MixtureComponent>& components, Index n, std::uint64_t seed);

/// Points on the unit 2-sphere with density proportional to
/// ((1 + z)/2)^(2·bias) + floor, drawn by rejection from the uniform sphere.
/// Dense near the north pole, sparse but never empty near the south pole.
DataMatrix gen_sphere(Index n, Scalar bias, std::uint64_t seed, Scalar floor = 0.02);

/// Two noisy concentric circles: class 0 on the inner radius, class 1 on the
/// outer one, angles uniform, radius perturbed by N(0, noise²).
struct RingsSpec {
  Index n_major = 400;
  Index n_minor = 40;
  Scalar r_major = 1.0;
  Scalar r_minor = 1.3;
  Scalar noise = 0.08;
  std::uint64_t seed = 0;
};

LabeledDataset gen_rings(const RingsSpec& spec);

/// Planar Gaussian blobs at (c·gap, c mod 2) sampled towards their edges: a
/// draw at standardised radius ρ is kept with probability clamp(ρ²/4, floor, 1).
struct BlobsSpec {
  std::vector<Index> sizes{300, 150, 60, 25, 15};
  std::vector<Scalar> sd{1.0, 0.8, 0.7, 0.6, 0.5};
  Scalar gap = 3.0;
  Scalar floor = 0.05;
  std::uint64_t seed = 0;
};

LabeledDataset gen_edge_biased_blobs(const BlobsSpec& spec);

}  // namespace sugar
