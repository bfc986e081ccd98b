#include "sugar/kernel.hpp"
#include "sugar/parallel.hpp"
#include "sugar/synth.hpp"

#include <doctest.h>

#include <cmath>

using namespace sugar;

namespace {

DataMatrix line(std::initializer_list<double> xs) {
  PointMatrix m(static_cast<Index>(xs.size()), 1);
  Index i = 0;
  for (double v : xs) m(i++, 0) = v;
  return DataMatrix(std::move(m));
}

DataMatrix random_points(Index n, Index d, unsigned seed) {
  std::srand(seed);
  return DataMatrix(PointMatrix::Random(n, d));
}

}  // namespace

TEST_CASE("BandwidthSpec parse, print and validate") {
  CHECK(BandwidthSpec::parse("maxmin:2.5") == BandwidthSpec::maxmin(2.5));
  CHECK(BandwidthSpec::parse("adaptive:7") == BandwidthSpec::adaptive(7));
  CHECK(BandwidthSpec::parse("fixed:0.25") == BandwidthSpec::fixed(0.25));
  for (const char* s : {"maxmin:2", "adaptive:10", "fixed:1.5"}) {
    const BandwidthSpec b = BandwidthSpec::parse(s);
    CHECK(BandwidthSpec::parse(b.to_string()) == b);
  }
  CHECK_THROWS_AS(BandwidthSpec::parse("maxmin"), std::invalid_argument);
  CHECK_THROWS_AS(BandwidthSpec::parse("maxmin:1.5"), std::invalid_argument);
  CHECK_THROWS_AS(BandwidthSpec::parse("adaptive:2.5"), std::invalid_argument);
  CHECK_THROWS_AS(BandwidthSpec::parse("adaptive:0"), std::invalid_argument);
  CHECK_THROWS_AS(BandwidthSpec::parse("fixed:0"), std::invalid_argument);
  CHECK_THROWS_AS(BandwidthSpec::parse("gauss:1"), std::invalid_argument);
}

TEST_CASE("pairwise_sq_dist matches direct differences") {
  const DataMatrix a = random_points(6, 3, 1);
  const DataMatrix b = random_points(4, 3, 2);
  const Matrix d = pairwise_sq_dist(a, b);
  for (Index i = 0; i < 6; ++i) {
    for (Index j = 0; j < 4; ++j) CHECK(d(i, j) == doctest::Approx((a.values().row(i) - b.values().row(j)).squaredNorm()));
  }
  CHECK_THROWS_AS(pairwise_sq_dist(a, random_points(2, 2, 3)), std::invalid_argument);
}

TEST_CASE("maxmin bandwidth on a 1-D line") {
  // Nearest-neighbour gaps: 1, 1, 2, 2 -> max min squared distance 4.
  const DataMatrix x = line({0, 1, 3, 5});
  CHECK(maxmin_bandwidth(x, 2.0) == doctest::Approx(8.0));
  CHECK(maxmin_bandwidth(x, 3.0) == doctest::Approx(12.0));
  CHECK_THROWS_AS(resolve_bandwidth(line({1, 1, 1}), BandwidthSpec::maxmin()), NumericalError);
}

TEST_CASE("adaptive bandwidths are L1 distances to the r-th neighbour") {
  PointMatrix m(4, 2);
  m << 0, 0, 1, 1, 3, 0, 0, 5;
  const DataMatrix x(m);
  const Vector s = adaptive_bandwidths(x, 1);
  CHECK(s(0) == doctest::Approx(2.0));
  CHECK(s(1) == doctest::Approx(2.0));
  CHECK(s(2) == doctest::Approx(3.0));
  CHECK(s(3) == doctest::Approx(5.0));
  const Vector s2 = adaptive_bandwidths(x, 2);
  CHECK(s2(0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(adaptive_bandwidths(x, 4), std::invalid_argument);
  CHECK_THROWS_AS(adaptive_bandwidths(line({0, 0, 5}), 1), NumericalError);
}

TEST_CASE("fixed Gaussian kernel entries follow the definition") {
  const DataMatrix x = line({0, 1, 3});
  const KernelMatrix k = gaussian_kernel(x, BandwidthSpec::fixed(0.5));
  CHECK(k.square);
  CHECK(k.values(0, 0) == 1.0);
  CHECK(k.values(0, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(k.values(0, 2) == doctest::Approx(std::exp(-9.0)));
}

TEST_CASE("adaptive kernel uses σ_iσ_j and stays symmetric") {
  const DataMatrix x = random_points(30, 2, 5);
  const KernelMatrix k = gaussian_kernel(x, BandwidthSpec::adaptive(3));
  const Vector s = adaptive_bandwidths(x, 3);
  for (Index i = 0; i < 30; ++i) {
    for (Index j = 0; j < 30; ++j) {
      const double d2 = (x.values().row(i) - x.values().row(j)).squaredNorm();
      CHECK(k.values(i, j) == doctest::Approx(std::exp(-d2 / (2 * s(i) * s(j)))));
      CHECK(k.values(i, j) == k.values(j, i));
    }
  }
}

TEST_CASE("kernel symmetry and unit diagonal for every bandwidth mode") {
  const DataMatrix x = gen_circle(60, 1.0, 3);
  for (const auto& bw : {BandwidthSpec::fixed(0.1), BandwidthSpec::maxmin(2.0), BandwidthSpec::adaptive(5)}) {
    const KernelMatrix k = gaussian_kernel(x, bw);
    CHECK((k.values - k.values.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((k.values.diagonal().array() == 1.0).all());
    CHECK((k.values.array() >= 0).all());
    CHECK((k.values.array() <= 1).all());
  }
}

TEST_CASE("rectangular kernel resolves the bandwidth on the reference side") {
  const DataMatrix a = line({0.5, 2});
  const DataMatrix b = line({0, 1, 3});
  const KernelMatrix k = gaussian_kernel(a, b, BandwidthSpec::maxmin(2.0));
  CHECK_FALSE(k.square);
  const double s2 = maxmin_bandwidth(b, 2.0);
  CHECK(k.values(0, 1) == doctest::Approx(std::exp(-0.25 / (2 * s2))));
  CHECK(k.values(1, 2) == doctest::Approx(std::exp(-1.0 / (2 * s2))));
}

TEST_CASE("degrees, sparsities and streamed profile agree") {
  const DataMatrix x = gen_circle(80, 2.0, 9);
  for (const auto& bw : {BandwidthSpec::maxmin(2.0), BandwidthSpec::adaptive(10)}) {
    const KernelMatrix k = gaussian_kernel(x, bw);
    const DegreeProfile dense = degrees(k);
    const DegreeProfile streamed = degree_profile(x, bw);
    CHECK(dense.degrees == streamed.degrees);
    CHECK((dense.degrees - k.values.rowwise().sum()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((dense.sparsities.cwiseProduct(dense.degrees).array() - 1).abs().maxCoeff() < 1e-15);
    CHECK(dense.measure == dense.sparsities);
  }
  CHECK_THROWS_AS(make_degree_profile(Vector::Zero(2)), NumericalError);
}

TEST_CASE("row_normalize gives a row-stochastic operator") {
  const DataMatrix x = random_points(40, 3, 8);
  for (const auto& bw : {BandwidthSpec::maxmin(2.0), BandwidthSpec::adaptive(4), BandwidthSpec::fixed(0.01)}) {
    const DiffusionOperator p = row_normalize(gaussian_kernel(x, bw));
    CHECK((p.values.rowwise().sum().array() - 1).abs().maxCoeff() < 1e-12);
    CHECK((p.values.array() >= 0).all());
  }
}

TEST_CASE("kernel results do not depend on the worker count") {
  const DataMatrix x = random_points(300, 3, 4);
  const std::size_t before = max_threads();
  set_max_threads(1);
  const KernelMatrix k1 = gaussian_kernel(x, BandwidthSpec::adaptive(10));
  const DegreeProfile d1 = degree_profile(x, BandwidthSpec::maxmin(2.0));
  set_max_threads(4);
  const KernelMatrix k4 = gaussian_kernel(x, BandwidthSpec::adaptive(10));
  const DegreeProfile d4 = degree_profile(x, BandwidthSpec::maxmin(2.0));
  set_max_threads(before);
  CHECK(k1.values == k4.values);
  CHECK(d1.degrees == d4.degrees);
}

TEST_CASE("parallel_for visits each index once and rethrows worker errors") {
  const std::size_t before = max_threads();
  set_max_threads(4);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits[i];
  });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(1000, [](std::size_t b, std::size_t) {
                    if (b > 0) throw NumericalError("boom");
                  }),
                  NumericalError);
  set_max_threads(before);
}
