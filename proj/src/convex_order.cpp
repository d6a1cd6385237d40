#include "cvxorder/convex_order.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvxorder/errors.hpp"
#include "cvxorder/ot.hpp"

namespace cvxorder {

RhoCandidate RhoCandidate::on_grid(BallGrid grid, std::vector<double> weights) {
  if (weights.size() != grid.nodes.size()) throw InvalidInput("grid candidate: one weight per node required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidInput("grid candidate: weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("grid candidate: weights must sum to 1");
  return RhoCandidate(Grid{std::move(grid), std::move(weights)});
}

RhoCandidate RhoCandidate::free(std::vector<Point> points, double radius) {
  if (points.empty()) throw InvalidInput("free candidate: no points");
  const std::size_t d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d) throw DimensionError("free candidate: mixed dimensions");
    if (norm(p) > radius + 1e-12) throw InvalidInput("free candidate: point outside the ball");
  }
  return RhoCandidate(Free{std::move(points), radius});
}

std::size_t RhoCandidate::dim() const {
  return is_grid() ? grid().grid.dim : free_points().points.front().size();
}

DiscreteMeasure RhoCandidate::measure() const {
  if (is_grid()) return {grid().grid.dim, grid().grid.nodes, grid().weights};
  return from_samples(free_points().points);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Ordered:
      return "ordered";
    case Verdict::NotOrdered:
      return "not_ordered";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::IndirectHistogram:
      return "indirect-hist";
    case Method::IndirectSamples:
      return "indirect-samples";
    case Method::Direct:
      return "direct";
  }
  return "?";
}

double objective(const RhoCandidate& rho, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const DiscreteMeasure r = rho.measure();
  return max_covariance(nu, r) - max_covariance(mu, r);
}

double default_epsilon(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return 1e-6 * (1.0 + second_moment(mu) + second_moment(nu));
}

Verdict decide(double v_hat, double epsilon, const std::optional<OracleVerdict>& oracle) {
  if (v_hat < -epsilon) return Verdict::NotOrdered;
  if (oracle) return oracle->ordered ? Verdict::Ordered : Verdict::Inconclusive;
  return std::abs(v_hat) < epsilon ? Verdict::Inconclusive : Verdict::Ordered;
}

namespace {

void require_compatible(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) {
    throw DimensionError("mu lives in R^" + std::to_string(mu.dim()) + ", nu in R^" +
                         std::to_string(nu.dim()));
  }
}

void require_budget(const EstimateOptions& o) {
  if (o.budget < 1) throw InvalidInput("evaluation budget N must be at least 1");
  if (!(o.radius > 0.0)) throw InvalidInput("ball radius must be positive");
  if (o.epsilon && !(*o.epsilon >= 0.0)) throw InvalidInput("epsilon must be non-negative");
}

void finish(ConvexOrderReport& rep, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
            const EstimateOptions& o) {
  rep.epsilon = o.epsilon ? *o.epsilon : default_epsilon(mu, nu);
  if (o.use_oracle) {
    const OracleKind kind = applicable_oracle(mu, nu);
    if (kind != OracleKind::None) rep.oracle = run_oracle(kind, mu, nu);
  }
  rep.verdict = decide(rep.v_hat, rep.epsilon, rep.oracle);
  if (rep.oracle) rep.oracle_agreement = (rep.v_hat < -rep.epsilon) != rep.oracle->ordered;
}

// Transport value against a fixed cost matrix with varying rho weights.
double covariance_with(const CostMatrix& cost, std::span<const double> rho_w,
                       const DiscreteMeasure& m) {
  return solve_transport(cost, rho_w, m.weights(), Sense::Max).primal_value;
}

}  // namespace

ConvexOrderReport estimate_v_indirect(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                      IndirectMode mode, const EstimateOptions& options) {
  require_compatible(mu, nu);
  require_budget(options);
  if (options.grid_size < 2) throw InvalidInput("grid size g must be at least 2");
  if (mode == IndirectMode::Samples && (!mu.is_uniform() || !nu.is_uniform())) {
    throw InvalidInput("samples mode expects empirical measures with uniform weights");
  }

  BallGrid grid = ball_grid(mu.dim(), options.grid_size, options.radius);
  const std::size_t g = grid.nodes.size();
  // The grid is fixed for the whole run, so both cost matrices are too.
  const DiscreteMeasure nodes(grid.dim, grid.nodes, std::vector<double>(g, 1.0 / static_cast<double>(g)));
  const CostMatrix cost_mu = CostMatrix::inner_product(nodes, mu);
  const CostMatrix cost_nu = CostMatrix::inner_product(nodes, nu);

  const SimplexObjective f = [&](std::span<const double> w) {
    return covariance_with(cost_nu, w, nu) - covariance_with(cost_mu, w, mu);
  };
  SearchOptions so;
  so.budget = options.budget;
  so.seed = options.seed;
  const DirichletSearch fallback;
  const SimplexOptimizer& opt = options.optimizer ? *options.optimizer : fallback;
  SearchResult sr = opt.minimize(f, g, so);

  ConvexOrderReport rep;
  rep.method = mode == IndirectMode::Histogram ? Method::IndirectHistogram : Method::IndirectSamples;
  rep.v_hat = sr.best_value;
  rep.budget_used = sr.evaluations;
  rep.trace = std::move(sr.trace);
  // Re-normalize against rounding in the Dirichlet draw before validating.
  double total = 0.0;
  for (double w : sr.best_weights) total += w;
  for (double& w : sr.best_weights) w /= total;
  rep.witness_rho = RhoCandidate::on_grid(std::move(grid), std::move(sr.best_weights));
  finish(rep, mu, nu, options);
  return rep;
}

namespace {

// Per-axis Dirichlet magnitudes and signs of one direct candidate.
struct SignedDraw {
  std::vector<std::vector<double>> magnitude;  // dim x m
  std::vector<std::vector<double>> sign;       // dim x m, entries +-1
};

std::vector<Point> draw_points(const SignedDraw& s, double radius) {
  const std::size_t d = s.magnitude.size();
  const std::size_t m = s.magnitude.front().size();
  std::vector<Point> pts(m, Point(d));
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t a = 0; a < d; ++a) pts[k][a] = radius * s.sign[a][k] * s.magnitude[a][k];
    const double r = norm(pts[k]);
    if (r > radius) {
      for (double& c : pts[k]) c *= radius / r;
    }
  }
  return pts;
}

}  // namespace

ConvexOrderReport estimate_v_direct(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const EstimateOptions& options) {
  require_compatible(mu, nu);
  require_budget(options);
  if (options.atoms < 1) throw InvalidInput("direct method needs m >= 1 atoms");
  const std::size_t d = mu.dim(), m = options.atoms;
  const double radius = options.radius;

  Rng rng = make_rng(options.seed, 0xd1u);
  std::bernoulli_distribution coin(0.5);
  // Probability that a sign is redrawn in a concentrated proposal.
  std::bernoulli_distribution resign(0.25);
  const std::vector<double> flat(m, 1.0);
  std::vector<double> alpha(m);

  auto global = [&](Rng& r) {
    SignedDraw s{std::vector<std::vector<double>>(d), std::vector<std::vector<double>>(d, std::vector<double>(m))};
    for (std::size_t a = 0; a < d; ++a) {
      s.magnitude[a] = sample_dirichlet(r, flat);
      for (double& x : s.sign[a]) x = coin(r) ? 1.0 : -1.0;
    }
    return s;
  };
  auto local = [&](Rng& r, const SignedDraw& inc, double kappa) {
    SignedDraw s{std::vector<std::vector<double>>(d), inc.sign};
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t k = 0; k < m; ++k) alpha[k] = kappa * inc.magnitude[a][k] + 1.0;
      s.magnitude[a] = sample_dirichlet(r, alpha);
      for (double& x : s.sign[a]) {
        if (resign(r)) x = coin(r) ? 1.0 : -1.0;
      }
    }
    return s;
  };
  auto evaluate = [&](const SignedDraw& s) {
    const DiscreteMeasure rho = from_samples(draw_points(s, radius));
    return max_covariance(nu, rho) - max_covariance(mu, rho);
  };

  SignedDraw best;
  ConvexOrderReport rep;
  rep.method = Method::Direct;
  rep.v_hat = std::numeric_limits<double>::infinity();
  detail::two_stage_search(rng, options.budget, std::max<std::size_t>(10, 2 * m), 5,
                           static_cast<double>(m), global, local, evaluate, best, rep.v_hat,
                           rep.trace);
  rep.budget_used = rep.trace.size();
  rep.witness_rho = RhoCandidate::free(draw_points(best, radius), radius);
  finish(rep, mu, nu, options);
  return rep;
}

ConvexOrderReport estimate_v(const DiscreteMeasure& mu, const DiscreteMeasure& nu, Method method,
                             const EstimateOptions& options) {
  switch (method) {
    case Method::IndirectHistogram:
      return estimate_v_indirect(mu, nu, IndirectMode::Histogram, options);
    case Method::IndirectSamples:
      return estimate_v_indirect(mu, nu, IndirectMode::Samples, options);
    case Method::Direct:
      return estimate_v_direct(mu, nu, options);
  }
  throw InvalidInput("unknown estimation method");
}

double check_w2_inequality(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const DiscreteMeasure& rho) {
  require_compatible(mu, nu);
  require_compatible(mu, rho);
  const double rhs = second_moment(nu) - second_moment(mu);
  const double lhs = wasserstein2_sq(nu, rho) - wasserstein2_sq(mu, rho);
  return rhs - lhs;
}

double check_easy_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_compatible(mu, nu);
  return second_moment(nu) - second_moment(mu) - wasserstein2_sq(mu, nu);
}

}  // namespace cvxorder
