#include "cvxorder/ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cvxorder/errors.hpp"
#include "network_simplex.hpp"

namespace cvxorder {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), c_(std::move(entries)) {
  if (c_.size() != rows_ * cols_) throw InvalidInput("cost matrix entry count does not match its shape");
  for (double c : c_) {
    if (!std::isfinite(c)) throw InvalidInput("cost matrix has a non-finite entry");
  }
}

namespace {

void require_same_dim(const DiscreteMeasure& x, const DiscreteMeasure& y) {
  if (x.dim() != y.dim()) {
    throw DimensionError("measures live in R^" + std::to_string(x.dim()) + " and R^" +
                         std::to_string(y.dim()));
  }
}

template <typename F>
CostMatrix pairwise(const DiscreteMeasure& x, const DiscreteMeasure& y, F&& f) {
  require_same_dim(x, y);
  std::vector<double> c(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) c[i * y.size() + j] = f(x.point(i), y.point(j));
  }
  return {x.size(), y.size(), std::move(c)};
}

double squared_distance(const Point& p, const Point& q) {
  double s = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) s += (p[a] - q[a]) * (p[a] - q[a]);
  return s;
}

void check_weights(std::span<const double> w, const char* side) {
  double total = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) throw InvalidInput(std::string(side) + " weights must be non-negative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidInput(std::string(side) + " weights must sum to 1");
}

}  // namespace

CostMatrix CostMatrix::inner_product(const DiscreteMeasure& x, const DiscreteMeasure& y) {
  return pairwise(x, y, [](const Point& p, const Point& q) { return dot(p, q); });
}

CostMatrix CostMatrix::squared_euclidean(const DiscreteMeasure& x, const DiscreteMeasure& y) {
  return pairwise(x, y, squared_distance);
}

CostMatrix CostMatrix::euclidean(const DiscreteMeasure& x, const DiscreteMeasure& y) {
  return pairwise(x, y, [](const Point& p, const Point& q) { return std::sqrt(squared_distance(p, q)); });
}

double TransportPlan::dual_value(std::span<const double> a, std::span<const double> b) const {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * dual_f[i];
  for (std::size_t j = 0; j < b.size(); ++j) s += b[j] * dual_g[j];
  return s;
}

TransportPlan solve_transport(const CostMatrix& cost, std::span<const double> a,
                              std::span<const double> b, Sense sense) {
  const std::size_t n = cost.rows(), m = cost.cols();
  if (a.size() != n || b.size() != m) {
    throw InvalidInput("weights of sizes " + std::to_string(a.size()) + " and " +
                       std::to_string(b.size()) + " do not match a " + std::to_string(n) + "x" +
                       std::to_string(m) + " cost matrix");
  }
  if (n == 0 || m == 0) throw InvalidInput("transport problem with an empty side");
  check_weights(a, "source");
  check_weights(b, "target");

  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] > 0.0) rows.push_back(i);
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (b[j] > 0.0) cols.push_back(j);
  }

  // Work in the Min sense; a Max problem is a Min problem on negated costs.
  const double sign = sense == Sense::Max ? -1.0 : 1.0;
  auto c = [&](std::size_t i, std::size_t j) { return sign * cost(i, j); };

  std::vector<double> sub_cost(rows.size() * cols.size());
  std::vector<double> sub_a(rows.size()), sub_b(cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    sub_a[r] = a[rows[r]];
    for (std::size_t k = 0; k < cols.size(); ++k) sub_cost[r * cols.size() + k] = c(rows[r], cols[k]);
  }
  for (std::size_t k = 0; k < cols.size(); ++k) sub_b[k] = b[cols[k]];

  const auto res = detail::transport_min_cost(sub_cost, rows.size(), cols.size(), sub_a, sub_b);

  TransportPlan plan;
  plan.rows = n;
  plan.cols = m;
  plan.sense = sense;
  plan.matrix.assign(n * m, 0.0);
  constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> f(n, kUnset), g(m, kUnset);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    f[rows[r]] = res.u[r];
    for (std::size_t k = 0; k < cols.size(); ++k) {
      plan.matrix[rows[r] * m + cols[k]] = std::max(0.0, res.flow[r * cols.size() + k]);
    }
  }
  for (std::size_t k = 0; k < cols.size(); ++k) g[cols[k]] = res.v[k];

  // Potentials of pruned atoms: the tightest values keeping f + g <= c.
  for (std::size_t j = 0; j < m; ++j) {
    if (!std::isnan(g[j])) continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i : rows) best = std::min(best, c(i, j) - f[i]);
    g[j] = best;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isnan(f[i])) continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) best = std::min(best, c(i, j) - g[j]);
    f[i] = best;
  }

  const double shift = g[0];
  for (double& x : f) x = sign * (x + shift);
  for (double& x : g) x = sign * (x - shift);
  plan.dual_f = std::move(f);
  plan.dual_g = std::move(g);

  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) value += cost(i, j) * plan.matrix[i * m + j];
  }
  plan.primal_value = value;
  return plan;
}

TransportPlan max_covariance_plan(const DiscreteMeasure& mu, const DiscreteMeasure& rho) {
  return solve_transport(CostMatrix::inner_product(mu, rho), mu.weights(), rho.weights(), Sense::Max);
}

double max_covariance(const DiscreteMeasure& mu, const DiscreteMeasure& rho) {
  return max_covariance_plan(mu, rho).primal_value;
}

double wasserstein2_sq(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return solve_transport(CostMatrix::squared_euclidean(mu, nu), mu.weights(), nu.weights(), Sense::Min)
      .primal_value;
}

double wasserstein1(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return solve_transport(CostMatrix::euclidean(mu, nu), mu.weights(), nu.weights(), Sense::Min)
      .primal_value;
}

double wasserstein2_sq_quantile(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != 1 || nu.dim() != 1) throw DimensionError("quantile W2 requires 1D measures");
  auto sorted = [](const DiscreteMeasure& m) {
    std::vector<std::size_t> idx(m.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t x, std::size_t y) { return m.point(x)[0] < m.point(y)[0]; });
    return idx;
  };
  const auto p = sorted(mu), q = sorted(nu);
  // Integrate (F_mu^-1 - F_nu^-1)^2 over (0, 1] between merged cdf levels.
  std::size_t i = 0, j = 0;
  double level = 0.0;
  double cum_a = mu.weight(p[0]), cum_b = nu.weight(q[0]);
  double total = 0.0;
  while (true) {
    const bool last_a = i + 1 == p.size(), last_b = j + 1 == q.size();
    const double ea = last_a ? 1.0 : std::min(cum_a, 1.0);
    const double eb = last_b ? 1.0 : std::min(cum_b, 1.0);
    const double next = std::min(ea, eb);
    const double diff = mu.point(p[i])[0] - nu.point(q[j])[0];
    total += std::max(0.0, next - level) * diff * diff;
    level = std::max(level, next);
    if (last_a && last_b) break;
    if (!last_a && ea <= next) cum_a += mu.weight(p[++i]);
    if (!last_b && eb <= next) cum_b += nu.weight(q[++j]);
  }
  return total;
}

}  // namespace cvxorder
