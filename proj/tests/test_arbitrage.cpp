#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "cvxorder/arbitrage.hpp"
#include "cvxorder/errors.hpp"
#include "cvxorder/ot.hpp"

using namespace cvxorder;

namespace {

DiscreteMeasure line(std::vector<double> xs, std::vector<double> ws) {
  std::vector<Point> pts;
  for (double x : xs) pts.push_back({x});
  return {1, pts, ws};
}

std::pair<DiscreteMeasure, DiscreteMeasure> example(ExampleFamily f, double p) {
  ExampleSpec spec;
  spec.family = f;
  spec.param = p;
  return make_example(spec);
}

}  // namespace

TEST_CASE("max-affine evaluation and tie-break") {
  const CalendarSpread f({{{-1.0}, 0.0, {-1.0}}, {{1.0}, 0.0, {1.0}}});
  CHECK(f.value(std::vector<double>{-2.0}) == 2.0);
  CHECK(f.value(std::vector<double>{0.5}) == 0.5);
  CHECK(f.active_piece(std::vector<double>{0.0}) == 0);
  CHECK(f.gradient(std::vector<double>{0.0})[0] == -1.0);
  CHECK(f.integrate(line({-1, 3}, {0.5, 0.5})) == doctest::Approx(2.0));
  CHECK_THROWS_AS(CalendarSpread(std::vector<AffinePiece>{}), InvalidInput);
  CHECK_THROWS_AS(CalendarSpread({{{1.0}, 0.0, {1.0}}, {{1.0, 0.0}, 0.0, {1.0, 0.0}}}), DimensionError);
  CHECK_THROWS_AS(f.integrate(dirac({0.0, 0.0})), DimensionError);
}

TEST_CASE("barycentric projection") {
  const auto nu = line({-1, 1}, {0.5, 0.5});
  SUBCASE("point mass rho") {
    const auto rho = dirac({0.4});
    const auto bp = barycentric_projection(max_covariance_plan(rho, nu), rho.points(), nu.points());
    REQUIRE(bp.size() == 2);
    for (const auto& p : bp) CHECK(p.gradient[0] == doctest::Approx(0.4));
  }
  SUBCASE("comonotone plan") {
    const auto bp = barycentric_projection(max_covariance_plan(nu, nu), nu.points(), nu.points());
    REQUIRE(bp.size() == 2);
    CHECK(bp[0].gradient[0] == doctest::Approx(-1.0));
    CHECK(bp[1].gradient[0] == doctest::Approx(1.0));
  }
  SUBCASE("single-atom nu forces the product plan") {
    const auto rho = line({-1, 0.5}, {0.3, 0.7});
    const auto one = dirac({2.0});
    const auto bp = barycentric_projection(max_covariance_plan(rho, one), rho.points(), one.points());
    REQUIRE(bp.size() == 1);
    CHECK(bp[0].gradient[0] == doctest::Approx(mean(rho)[0]));
  }
  SUBCASE("shape mismatch") {
    const auto plan = max_covariance_plan(nu, nu);
    CHECK_THROWS_AS(barycentric_projection(plan, {{0.0}}, nu.points()), InvalidInput);
  }
}

TEST_CASE("intercepts from longest paths") {
  SUBCASE("single anchor") {
    const auto fit = fit_intercepts({{2.0, 1.0}}, {{0.5, -1.0}});
    CHECK(fit.intercepts[0] == doctest::Approx(-0.0));
    CHECK_FALSE(fit.used_fallback);
  }
  SUBCASE("two anchors in 1D") {
    const auto fit = fit_intercepts({{-1.0}, {1.0}}, {{-1.0}, {1.0}});
    CHECK_FALSE(fit.used_fallback);
    CHECK(fit.potentials[0] == 0.0);
    CHECK(fit.potentials[1] == doctest::Approx(-2.0));
    // f(x) = max(-x - 1, x - 3): a kink shifted off the origin.
    const CalendarSpread f({{{-1.0}, fit.intercepts[0], {-1.0}}, {{1.0}, fit.intercepts[1], {1.0}}});
    CHECK(f.value(std::vector<double>{-1.0}) == doctest::Approx(0.0));
    CHECK(f.value(std::vector<double>{1.0}) == doctest::Approx(-2.0));
    CHECK(f.value(std::vector<double>{3.0}) == doctest::Approx(0.0));
  }
  SUBCASE("gradients of a convex quadratic") {
    // q(y) = |y|^2 / 2 has gradient y. Longest paths give the smallest
    // consistent potentials: below q - q(y_0), tangent pieces at every
    // anchor, and a gap that closes linearly in the grid pitch.
    auto worst_gap = [](int k) {
      std::vector<Point> ys;
      for (int i = -k; i <= k; ++i) {
        for (int j = -k; j <= k; ++j) ys.push_back({static_cast<double>(i) / k, static_cast<double>(j) / k});
      }
      const auto fit = fit_intercepts(ys, ys);
      CHECK_FALSE(fit.used_fallback);
      std::vector<AffinePiece> pieces;
      for (std::size_t a = 0; a < ys.size(); ++a) pieces.push_back({ys[a], fit.intercepts[a], ys[a]});
      const CalendarSpread f(pieces);
      const double q0 = 0.5 * dot(ys[0], ys[0]);
      double gap = 0.0;
      for (std::size_t a = 0; a < ys.size(); ++a) {
        const double exact = 0.5 * dot(ys[a], ys[a]) - q0;
        CHECK(fit.potentials[a] <= exact + 1e-12);
        CHECK(f.value(ys[a]) == doctest::Approx(fit.potentials[a]).epsilon(1e-12));
        CHECK(dot(ys[a], ys[a]) + fit.intercepts[a] == doctest::Approx(f.value(ys[a])).epsilon(1e-12));
        gap = std::max(gap, exact - fit.potentials[a]);
      }
      return gap;
    };
    const double coarse = worst_gap(2), fine = worst_gap(4);
    CHECK(coarse > 0.0);
    CHECK(fine <= 0.6 * coarse);
  }
  SUBCASE("non-monotone gradients use the fallback") {
    const auto fit = fit_intercepts({{-1.0}, {1.0}}, {{1.0}, {-1.0}});
    CHECK(fit.used_fallback);
    REQUIRE(fit.intercepts.size() == 2);
    for (double c : fit.intercepts) CHECK(std::isfinite(c));
  }
  CHECK_THROWS_AS(fit_intercepts({}, {}), InvalidInput);
  CHECK_THROWS_AS(fit_intercepts({{0.0}}, {}), InvalidInput);
}

TEST_CASE("detect_arbitrage") {
  EstimateOptions o;
  SUBCASE("identical measures") {
    const auto [mu, nu] = example(ExampleFamily::TwoPoint, 0.0);
    const auto rep = detect_arbitrage(mu, nu, Method::IndirectHistogram, o);
    CHECK_FALSE(rep.found);
    CHECK_FALSE(rep.spread.has_value());
  }
  SUBCASE("two_point s = 0.5") {
    const auto [mu, nu] = example(ExampleFamily::TwoPoint, 0.5);
    const auto rep = detect_arbitrage(mu, nu, Method::IndirectHistogram, o);
    REQUIRE(rep.found);
    CHECK(rep.gap > 0.0);
    CHECK(rep.gap == doctest::Approx(rep.spread->integrate(mu) - rep.spread->integrate(nu)));
    const auto diag = verify_spread(*rep.spread, mu, nu, random_test_pairs(mu, nu, 1000, 1));
    CHECK(diag.ok);
    CHECK(diag.min_payoff >= rep.gap - 1e-9);
    // Arbitrage soundness: the exact oracle agrees the order fails.
    CHECK_FALSE(martingale_feasibility(mu, nu).ordered);
  }
  SUBCASE("four_point s = 0.5") {
    const auto [mu, nu] = example(ExampleFamily::FourPoint, 0.5);
    const auto rep = detect_arbitrage(mu, nu, Method::Direct, o);
    REQUIRE(rep.found);
    CHECK(verify_spread(*rep.spread, mu, nu, random_test_pairs(mu, nu, 500, 2)).ok);
  }
}

TEST_CASE("verify_spread") {
  const auto [mu, nu] = example(ExampleFamily::TwoPoint, 0.5);
  const CalendarSpread f({{{-1.0}, 0.0, {-1.0}}, {{1.0}, 0.0, {1.0}}, {{0.3}, 0.2, {0.0}}});
  const double gap = f.integrate(mu) - f.integrate(nu);

  std::vector<std::pair<Point, Point>> diagonal;
  for (double x : {-3.0, -0.2, 0.0, 0.7, 2.5}) diagonal.push_back({{x}, {x}});
  const auto d = verify_spread(f, mu, nu, diagonal);
  CHECK(d.min_payoff == doctest::Approx(gap));
  CHECK(d.ok);

  const auto pairs = random_test_pairs(mu, nu, 1000, 9);
  CHECK(pairs.size() == 1000);
  const auto r = verify_spread(f, mu, nu, pairs);
  CHECK(r.pairs == 1000);
  CHECK(r.min_payoff >= gap - 1e-9);
}

TEST_CASE("max-affine payoffs are convex with valid subgradients") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> z;
  std::vector<AffinePiece> pieces;
  for (int k = 0; k < 15; ++k) pieces.push_back({{z(rng), z(rng)}, z(rng), {0.0, 0.0}});
  const CalendarSpread f(pieces);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const Point x{3 * z(rng), 3 * z(rng)}, y{3 * z(rng), 3 * z(rng)};
    const double lam = u(rng);
    const Point mid{lam * x[0] + (1 - lam) * y[0], lam * x[1] + (1 - lam) * y[1]};
    CHECK(f.value(mid) <= lam * f.value(x) + (1 - lam) * f.value(y) + 1e-12);
    const Point& g = f.gradient(x);
    CHECK(f.value(y) >= f.value(x) + g[0] * (y[0] - x[0]) + g[1] * (y[1] - x[1]) - 1e-12);
  }
}
