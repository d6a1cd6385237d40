#include "doctest.h"

#include <cmath>
#include <random>

#include "cvxorder/errors.hpp"
#include "cvxorder/oracles.hpp"

using namespace cvxorder;

namespace {

DiscreteMeasure line(std::vector<double> xs, std::vector<double> ws) {
  std::vector<Point> pts;
  for (double x : xs) pts.push_back({x});
  return {1, pts, ws};
}

DiscreteMeasure example(ExampleFamily f, double s) {
  ExampleSpec spec;
  spec.family = f;
  spec.param = s;
  return make_example(spec).first;
}

std::pair<DiscreteMeasure, DiscreteMeasure> example_pair(ExampleFamily f, double s) {
  ExampleSpec spec;
  spec.family = f;
  spec.param = s;
  return make_example(spec);
}

}  // namespace

TEST_CASE("quantile test on the reference pairs") {
  const auto narrow = line({-1, 1}, {0.5, 0.5});
  const auto wide = line({-2, 2}, {0.5, 0.5});
  CHECK(quantile_test(narrow, wide).ordered);
  CHECK(quantile_test(narrow, narrow).ordered);

  const auto v = quantile_test(wide, narrow);
  CHECK_FALSE(v.ordered);
  const auto* cert = std::get_if<QuantileViolation>(&v.certificate);
  REQUIRE(cert != nullptr);
  CHECK(cert->x == doctest::Approx(0.5));
  CHECK(cert->integral == doctest::Approx(-0.5));
}

TEST_CASE("quantile test flags unequal means at level 1") {
  const auto v = quantile_test(line({0.0}, {1.0}), line({1, 3}, {0.5, 0.5}));
  CHECK_FALSE(v.ordered);
  const auto* cert = std::get_if<QuantileViolation>(&v.certificate);
  REQUIRE(cert != nullptr);
  CHECK(cert->x == 1.0);
  CHECK_THROWS_AS(quantile_test(dirac({0.0, 0.0}), dirac({0.0, 0.0})), DimensionError);
}

TEST_CASE("martingale LP on the reference pairs") {
  const auto nu = line({-1, 1}, {0.5, 0.5});
  const auto v = martingale_feasibility(dirac({0.0}), nu);
  CHECK(v.ordered);
  const auto* pi = std::get_if<MartingaleCoupling>(&v.certificate);
  REQUIRE(pi != nullptr);
  CHECK(pi->plan[0] == doctest::Approx(0.5));
  CHECK(pi->plan[1] == doctest::Approx(0.5));

  const auto [mu2, nu2] = example_pair(ExampleFamily::TwoPoint, 0.5);
  const auto bad = martingale_feasibility(mu2, nu2);
  CHECK_FALSE(bad.ordered);
  CHECK(std::holds_alternative<InfeasibleCoupling>(bad.certificate));

  const auto [mu4, nu4] = example_pair(ExampleFamily::FourPoint, 0.5);
  CHECK_FALSE(martingale_feasibility(mu4, nu4).ordered);
  const auto [mu4b, nu4b] = example_pair(ExampleFamily::FourPoint, -0.5);
  CHECK(martingale_feasibility(mu4b, nu4b).ordered);
}

TEST_CASE("martingale coupling satisfies its constraints") {
  const auto [mu, nu] = example_pair(ExampleFamily::FourPoint, -0.3);
  const auto v = martingale_feasibility(mu, nu);
  REQUIRE(v.ordered);
  const auto& pi = std::get<MartingaleCoupling>(v.certificate);
  for (std::size_t i = 0; i < pi.rows; ++i) {
    double row = 0.0;
    Point bary(2, 0.0);
    for (std::size_t j = 0; j < pi.cols; ++j) {
      const double w = pi.plan[i * pi.cols + j];
      CHECK(w >= -1e-12);
      row += w;
      for (std::size_t a = 0; a < 2; ++a) bary[a] += w * nu.point(j)[a];
    }
    CHECK(row == doctest::Approx(mu.weight(i)));
    for (std::size_t a = 0; a < 2; ++a) CHECK(bary[a] == doctest::Approx(row * mu.point(i)[a]).epsilon(1e-8));
  }
}

TEST_CASE("mean mismatch is reported before solving") {
  const auto v = martingale_feasibility(line({0.0}, {1.0}), line({1, 3}, {0.5, 0.5}));
  CHECK_FALSE(v.ordered);
  const auto* cert = std::get_if<MeanMismatch>(&v.certificate);
  REQUIRE(cert != nullptr);
  CHECK(cert->delta[0] == doctest::Approx(2.0));
}

TEST_CASE("oracle selection") {
  CHECK(applicable_oracle(dirac({0.0}), dirac({0.0})) == OracleKind::Quantile);
  CHECK(applicable_oracle(example(ExampleFamily::FourPoint, 0), example(ExampleFamily::FourPoint, 0)) ==
        OracleKind::Martingale);
  std::vector<Point> many(60, Point{0.0, 0.0});
  const auto big = from_samples(many);
  CHECK(applicable_oracle(big, big) == OracleKind::None);
  CHECK_THROWS_AS(martingale_feasibility(big, big), InvalidInput);
  CHECK_THROWS_AS(run_oracle(OracleKind::None, big, big), InvalidInput);
}

TEST_CASE("the two oracles agree on random 1D pairs") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(1, 6);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(rng), m = size(rng);
    std::vector<Point> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(m));
    for (auto& p : xs) p = {z(rng)};
    for (auto& p : ys) p = {2.0 * z(rng)};
    auto mu = from_samples(xs);
    auto nu = from_samples(ys);
    // Shift nu so that the means coincide exactly enough for both tests.
    const double shift = mean(mu)[0] - mean(nu)[0];
    for (auto& p : ys) p[0] += shift;
    nu = from_samples(ys);
    const bool q = quantile_test(mu, nu).ordered;
    const auto mv = martingale_feasibility(mu, nu);
    if (std::holds_alternative<MeanMismatch>(mv.certificate)) continue;
    CHECK(q == mv.ordered);
  }
}
