#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cvxorder/search.hpp"

using namespace cvxorder;

TEST_CASE("Dirichlet draws lie on the simplex") {
  Rng rng = make_rng(3, 1);
  const std::vector<double> flat(7, 1.0), peaked{50.0, 1.0, 1.0}, tiny(4, 1e-3);
  for (int k = 0; k < 200; ++k) {
    for (const auto* alpha : {&flat, &peaked, &tiny}) {
      const auto w = sample_dirichlet(rng, *alpha);
      REQUIRE(w.size() == alpha->size());
      for (double x : w) CHECK(x >= 0.0);
      CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("Dirichlet mean follows alpha") {
  Rng rng = make_rng(5, 2);
  const std::vector<double> alpha{6.0, 3.0, 1.0};
  std::vector<double> avg(3, 0.0);
  const int draws = 4000;
  for (int k = 0; k < draws; ++k) {
    const auto w = sample_dirichlet(rng, alpha);
    for (std::size_t i = 0; i < 3; ++i) avg[i] += w[i] / draws;
  }
  CHECK(avg[0] == doctest::Approx(0.6).epsilon(0.03));
  CHECK(avg[1] == doctest::Approx(0.3).epsilon(0.05));
  CHECK(avg[2] == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("linear objective: best value near the smallest coordinate") {
  const std::vector<double> c{0.9, -0.4, 0.3, 1.2, -0.1};
  const SimplexObjective f = [&](std::span<const double> w) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * w[i];
    return s;
  };
  SearchOptions o;
  o.budget = 400;
  const auto r = optimize_simplex(f, c.size(), o);
  const double lo = *std::min_element(c.begin(), c.end());
  const double hi = *std::max_element(c.begin(), c.end());
  CHECK(r.best_value - lo <= 0.05 * (hi - lo));
}

TEST_CASE("constant objective and unit budget") {
  int calls = 0;
  const SimplexObjective f = [&](std::span<const double>) {
    ++calls;
    return 2.5;
  };
  SearchOptions o;
  o.budget = 1;
  const auto r = optimize_simplex(f, 4, o);
  CHECK(calls == 1);
  CHECK(r.evaluations == 1);
  CHECK(r.best_value == 2.5);
  CHECK(r.best_weights.size() == 4);
  CHECK(r.trace == std::vector<double>{2.5});
}

TEST_CASE("trace is monotone and budget is respected") {
  const SimplexObjective f = [](std::span<const double> w) { return std::sin(7 * w[0]) + w[1] * w[2]; };
  for (std::size_t budget : {3u, 17u, 64u}) {
    SearchOptions o;
    o.budget = budget;
    o.seed = 8;
    const auto r = optimize_simplex(f, 3, o);
    CHECK(r.evaluations == budget);
    REQUIRE(r.trace.size() == budget);
    for (std::size_t k = 1; k < budget; ++k) CHECK(r.trace[k] <= r.trace[k - 1]);
    CHECK(r.trace.back() == r.best_value);
    CHECK(f(r.best_weights) == r.best_value);
  }
}

TEST_CASE("seeded runs are reproducible and prefix-consistent") {
  const SimplexObjective f = [](std::span<const double> w) { return w[0] - 2 * w[3] + w[1] * w[1]; };
  SearchOptions o;
  o.seed = 42;
  o.budget = 60;
  const auto a = optimize_simplex(f, 4, o);
  const auto b = optimize_simplex(f, 4, o);
  CHECK(a.trace == b.trace);
  CHECK(a.best_weights == b.best_weights);
  o.budget = 30;
  const auto c = optimize_simplex(f, 4, o);
  CHECK(std::equal(c.trace.begin(), c.trace.end(), a.trace.begin()));
  o.seed = 43;
  o.budget = 60;
  CHECK(optimize_simplex(f, 4, o).trace != a.trace);
}

TEST_CASE("invalid search parameters") {
  const SimplexObjective f = [](std::span<const double>) { return 0.0; };
  SearchOptions o;
  CHECK_THROWS_AS(optimize_simplex(f, 1, o), std::invalid_argument);
  o.budget = 0;
  CHECK_THROWS_AS(optimize_simplex(f, 3, o), std::invalid_argument);
  Rng rng = make_rng(0, 0);
  const std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS(sample_dirichlet(rng, bad), std::invalid_argument);
}
