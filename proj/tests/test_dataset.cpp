#include "sugar/csv.hpp"
#include "sugar/eval.hpp"
#include "sugar/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace sugar;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("sugar_test_" + name);
}

}  // namespace

TEST_CASE("DataMatrix rejects empty, non-finite and misnamed input") {
  CHECK_THROWS_AS(DataMatrix(PointMatrix(0, 2)), std::invalid_argument);
  CHECK_THROWS_AS(DataMatrix(PointMatrix(2, 0)), std::invalid_argument);
  PointMatrix bad(1, 2);
  bad << 1.0, std::nan("");
  CHECK_THROWS_AS(DataMatrix{bad}, std::invalid_argument);
  bad << 1.0, INFINITY;
  CHECK_THROWS_AS(DataMatrix{bad}, std::invalid_argument);
  CHECK_THROWS_AS(DataMatrix(PointMatrix::Zero(1, 2), {"a"}), std::invalid_argument);
}

TEST_CASE("LabeledDataset requires every class in [0, C) to be present") {
  const DataMatrix x(PointMatrix::Zero(3, 1));
  CHECK_NOTHROW(LabeledDataset(x, {0, 1, 1}));
  CHECK_THROWS_AS(LabeledDataset(x, {0, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(LabeledDataset(x, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(LabeledDataset(x, {-1, 0, 0}), std::invalid_argument);
  const LabeledDataset d(x, {0, 1, 1});
  CHECK(d.num_classes() == 2);
  CHECK(d.class_counts() == std::vector<Index>{1, 2});
}

TEST_CASE("parse_csv reads headers and reports bad cells by row and column") {
  const DataMatrix m = parse_csv("a,b\n1,2\n3,4\n", true);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m.col_names() == std::vector<std::string>{"a", "b"});
  CHECK(m(1, 0) == 3.0);

  try {
    parse_csv("1,2\n3,x\n", false);
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.row() == 2);
    CHECK(e.col() == 2);
  }
  CHECK_THROWS_AS(parse_csv("1,2\n3\n", false), CsvError);
  CHECK_THROWS_AS(parse_csv("", false), CsvError);
  CHECK_THROWS_AS(parse_csv("a,b\n", true), CsvError);
  CHECK_THROWS_AS(parse_csv("1,nan\n", false), CsvError);
}

TEST_CASE("parse_csv handles CRLF and quoted header names") {
  const DataMatrix m = parse_csv("\"x,1\",y\r\n1,2\r\n", true);
  CHECK(m.col_names() == std::vector<std::string>{"x,1", "y"});
  CHECK(m(0, 1) == 2.0);
}

TEST_CASE("format_csv output matches the documented examples") {
  CHECK(format_csv(DataMatrix(PointMatrix::Zero(1, 1))) == "0\n");
  const std::string named = format_csv(DataMatrix(PointMatrix::Zero(1, 2), {"x", "y"}));
  CHECK(named.substr(0, named.find('\n')) == "x,y");
}

TEST_CASE("CSV round trip reproduces every double exactly") {
  const DataMatrix x = gen_circle(50, 1.5, 3);
  const auto path = temp_file("roundtrip.csv");
  save_csv(x, path);
  const DataMatrix back = load_csv(path, true);
  CHECK(back.values() == x.values());
  CHECK(back.col_names() == x.col_names());
  std::filesystem::remove(path);
}

TEST_CASE("label files round trip and reject non-integers") {
  const auto path = temp_file("labels.csv");
  save_labels({0, 2, 1}, path);
  CHECK(load_labels(path) == Labels{0, 2, 1});
  {
    std::ofstream out(path);
    out << "label\n0\n1.5\n";
  }
  CHECK_THROWS(load_labels(path));
  std::filesystem::remove(path);
}

TEST_CASE("gen_circle lies on the unit circle and is deterministic") {
  const DataMatrix x = gen_circle(500, 2.0, 11);
  for (Index i = 0; i < x.rows(); ++i) CHECK(std::abs(x.values().row(i).squaredNorm() - 1) < 1e-12);
  CHECK(gen_circle(500, 2.0, 11).values() == x.values());
  CHECK(gen_circle(500, 2.0, 12).values() != x.values());
  CHECK_THROWS_AS(gen_circle(2, 0, 1), std::invalid_argument);
}

TEST_CASE("gen_circle with bias 0 passes a uniformity test") {
  const Vector a = circle_angles(gen_circle(10000, 0.0, 5));
  CHECK(ks_uniform_test(a, -std::numbers::pi, std::numbers::pi).p_value > 0.05);
}

TEST_CASE("gen_circle with bias concentrates mass near angle 0") {
  const Vector a = circle_angles(gen_circle(5000, 2.0, 5));
  const Index near = (a.array().abs() < std::numbers::pi / 4).count();
  // P(|u|^3 < 1/4) = 4^{-1/3}.
  CHECK(static_cast<double>(near) / 5000.0 == doctest::Approx(std::pow(0.25, 1.0 / 3.0)).epsilon(0.05));
}

TEST_CASE("swiss_roll_point matches the substitution example") {
  const Eigen::Vector3d p = swiss_roll_point(std::numbers::pi, 5);
  CHECK(std::abs(p(0) + 6 * std::numbers::pi) < 1e-12);
  CHECK(p(1) == 5);
  CHECK(std::abs(p(2)) < 1e-12);
}

TEST_CASE("gen_swiss_roll rows satisfy x² + z² = (6θ)²") {
  SwissRollSpec spec;
  spec.seed = 4;
  const SwissRoll roll = gen_swiss_roll_with_params(spec);
  CHECK(roll.points.rows() == 600);
  CHECK(roll.points.cols() == 3);
  for (Index i = 0; i < roll.points.rows(); ++i) {
    const auto r = roll.points.values().row(i);
    const double radius2 = 36 * roll.theta(i) * roll.theta(i);
    CHECK(std::abs(r(0) * r(0) + r(2) * r(2) - radius2) <= 1e-12 * radius2);
    CHECK(roll.theta(i) >= spec.theta_min);
    CHECK(roll.theta(i) <= spec.theta_max);
    CHECK(r(1) >= 0);
    CHECK(r(1) <= 20);
  }
  CHECK(gen_swiss_roll(spec).values() == roll.points.values());
  // θ density decreases: more mass in the lower half of the range.
  const double mid = (spec.theta_min + spec.theta_max) / 2;
  CHECK((roll.theta.array() < mid).count() > 400);
  spec.h_max = spec.h_min;
  CHECK_THROWS_AS(gen_swiss_roll(spec), std::invalid_argument);
}

TEST_CASE("gen_gaussian_mixture degenerate, weights and mean") {
  MixtureComponent c;
  c.mean = Vector::Constant(2, 3.0);
  c.covariance = Matrix::Zero(2, 2);
  const LabeledDataset one = gen_gaussian_mixture({c}, 20, 1);
  for (Index i = 0; i < 20; ++i) CHECK(one.data().values().row(i) == c.mean.transpose());

  MixtureComponent a;
  a.mean = Vector::Zero(1);
  a.covariance = Matrix::Identity(1, 1);
  a.weight = 0.9;
  MixtureComponent b = a;
  b.weight = 0.1;
  b.label = 1;
  const LabeledDataset two = gen_gaussian_mixture({a, b}, 1000, 9);
  // Binomial(1000, 0.1): σ = sqrt(90).
  CHECK(std::abs(static_cast<double>(two.class_counts()[1]) - 100.0) < 4 * std::sqrt(90.0));

  const LabeledDataset many = gen_gaussian_mixture({a}, 4000, 2);
  CHECK(std::abs(many.data().values().col(0).mean()) < 5.0 / std::sqrt(4000.0));

  MixtureComponent bad = a;
  bad.covariance(0, 0) = -1;
  CHECK_THROWS_AS(gen_gaussian_mixture({bad}, 10, 1), std::invalid_argument);
  bad = a;
  bad.weight = 0;
  CHECK_THROWS_AS(gen_gaussian_mixture({bad}, 10, 1), std::invalid_argument);
}

TEST_CASE("gen_sphere lies on the unit sphere and is denser near the north pole") {
  const DataMatrix x = gen_sphere(2000, 2.0, 3);
  for (Index i = 0; i < x.rows(); ++i) CHECK(std::abs(x.values().row(i).squaredNorm() - 1) < 1e-12);
  const Index north = (x.values().col(2).array() > 0).count();
  CHECK(north > 1500);
  CHECK(north < 2000);
}
