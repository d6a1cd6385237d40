#include "cvxorder/search.hpp"

#include <algorithm>

#include "cvxorder/errors.hpp"

namespace cvxorder {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

std::vector<double> sample_dirichlet(Rng& rng, std::span<const double> alpha) {
  std::vector<double> out(alpha.size());
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0)) throw InvalidInput("Dirichlet parameters must be positive");
    std::gamma_distribution<double> gamma(alpha[i], 1.0);
    out[i] = gamma(rng);
    total += out[i];
  }
  if (!(total > 0.0)) {
    // Every gamma variate underflowed; put the mass on the largest parameter.
    std::fill(out.begin(), out.end(), 0.0);
    out[static_cast<std::size_t>(std::max_element(alpha.begin(), alpha.end()) - alpha.begin())] = 1.0;
    return out;
  }
  for (double& x : out) x /= total;
  return out;
}

SearchResult DirichletSearch::minimize(const SimplexObjective& objective, std::size_t g,
                                       const SearchOptions& options) const {
  if (g < 2) throw InvalidInput("simplex search needs g >= 2");
  if (options.budget < 1) throw InvalidInput("simplex search needs a budget of at least 1");
  const std::size_t explore = options.explore > 0 ? options.explore : std::max<std::size_t>(10, 2 * g);
  const std::size_t round = std::max<std::size_t>(1, options.round_size);

  Rng rng = make_rng(options.seed, 0x51u);
  const std::vector<double> flat(g, 1.0);
  std::vector<double> alpha(g);

  SearchResult res;
  detail::two_stage_search(
      rng, options.budget, explore, round, static_cast<double>(g),
      [&](Rng& r) { return sample_dirichlet(r, flat); },
      [&](Rng& r, const std::vector<double>& inc, double kappa) {
        for (std::size_t i = 0; i < g; ++i) alpha[i] = kappa * inc[i] + 1.0;
        return sample_dirichlet(r, alpha);
      },
      [&](const std::vector<double>& w) { return objective(w); }, res.best_weights, res.best_value,
      res.trace);
  res.evaluations = res.trace.size();
  return res;
}

SearchResult optimize_simplex(const SimplexObjective& objective, std::size_t g,
                              const SearchOptions& options) {
  return DirichletSearch{}.minimize(objective, g, options);
}

}  // namespace cvxorder
