#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace cvxorder {

using Rng = std::mt19937_64;

/// Seeded generator; `stream` separates independent consumers of one seed.
Rng make_rng(std::uint64_t seed, std::uint64_t stream);

/// One draw from Dirichlet(alpha) via normalized Gamma(alpha_i, 1) variates.
std::vector<double> sample_dirichlet(Rng& rng, std::span<const double> alpha);

struct SearchOptions {
  std::size_t budget = 100;  // cap on objective evaluations
  std::uint64_t seed = 0;
  /// Evaluations spent on uniform Dirichlet(1,...,1) draws before the search
  /// concentrates around the incumbent. 0 selects max(10, 2 g).
  std::size_t explore = 0;
  /// Candidates generated (from the seed stream) per concentrated round.
  std::size_t round_size = 5;
};

struct SearchResult {
  std::vector<double> best_weights;
  double best_value = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  std::vector<double> trace;  // best value after each evaluation
};

using SimplexObjective = std::function<double(std::span<const double>)>;

/// Derivative-free minimizer over the probability simplex of dimension g.
class SimplexOptimizer {
 public:
  virtual ~SimplexOptimizer() = default;
  virtual SearchResult minimize(const SimplexObjective& objective, std::size_t g,
                                const SearchOptions& options) const = 0;
};

/// Two-stage Dirichlet random search. Stage one draws Dirichlet(1,...,1);
/// stage two draws Dirichlet(kappa * incumbent + 1) in rounds, starting at
/// kappa = g. A round without improvement doubles kappa (tighter proposals);
/// an improving round halves it again, never below g. The candidate stream does not depend on the budget, so a larger
/// budget only extends the sequence of evaluations.
class DirichletSearch final : public SimplexOptimizer {
 public:
  SearchResult minimize(const SimplexObjective& objective, std::size_t g,
                        const SearchOptions& options) const override;
};

SearchResult optimize_simplex(const SimplexObjective& objective, std::size_t g,
                              const SearchOptions& options);

namespace detail {

/// Shared driver for the Dirichlet searches. `global(rng)` proposes an
/// exploration candidate, `local(rng, incumbent, kappa)` a concentrated one.
template <typename Candidate, typename Global, typename Local, typename Evaluate>
void two_stage_search(Rng& rng, std::size_t budget, std::size_t explore, std::size_t round_size,
                      double kappa, Global&& global, Local&& local, Evaluate&& evaluate,
                      Candidate& best, double& best_value, std::vector<double>& trace) {
  std::size_t used = 0;
  auto consider = [&](Candidate&& c) {
    const double v = evaluate(c);
    ++used;
    const bool better = v < best_value || trace.empty();
    if (better) {
      best_value = v;
      best = std::move(c);
    }
    trace.push_back(best_value);
    return better;
  };
  while (used < budget && used < explore) consider(global(rng));
  const double kappa0 = kappa;
  std::vector<Candidate> round;
  while (used < budget) {
    // The whole round is drawn before any evaluation.
    round.clear();
    for (std::size_t k = 0; k < round_size; ++k) round.push_back(local(rng, best, kappa));
    bool improved = false;
    for (auto& c : round) {
      if (used == budget) break;
      improved = consider(std::move(c)) || improved;
    }
    // Tightening only after progress would shrink the steps geometrically
    // and freeze the search short of a vertex optimum.
    kappa = improved ? std::max(kappa0, 0.5 * kappa) : std::min(2.0 * kappa, 1e12);
  }
}

}  // namespace detail

}  // namespace cvxorder
