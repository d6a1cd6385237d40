#include "cvxorder/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cvxorder/errors.hpp"
#include "dense_simplex.hpp"

namespace cvxorder {

namespace {

constexpr double kQuantileTol = 1e-12;
constexpr double kMartingaleTol = 1e-8;
// Size cap for the dense martingale LP (atoms of mu times atoms of nu).
constexpr std::size_t kMaxMartingaleCells = 2500;

std::vector<std::size_t> sorted_order(const DiscreteMeasure& m) {
  std::vector<std::size_t> idx(m.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return m.point(a)[0] < m.point(b)[0]; });
  return idx;
}

}  // namespace

OracleVerdict quantile_test(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != 1 || nu.dim() != 1) throw DimensionError("quantile_test requires 1D measures");
  const auto p = sorted_order(mu), q = sorted_order(nu);

  std::size_t i = 0, j = 0;
  double level = 0.0, integral = 0.0;
  double cum_a = mu.weight(p[0]), cum_b = nu.weight(q[0]);
  QuantileViolation worst{0.0, 0.0};
  while (true) {
    const bool last_a = i + 1 == p.size(), last_b = j + 1 == q.size();
    const double ea = last_a ? 1.0 : std::min(cum_a, 1.0);
    const double eb = last_b ? 1.0 : std::min(cum_b, 1.0);
    const double next = std::min(ea, eb);
    integral += std::max(0.0, next - level) * (mu.point(p[i])[0] - nu.point(q[j])[0]);
    level = std::max(level, next);
    if (integral < worst.integral) worst = {level, integral};
    if (last_a && last_b) break;
    if (!last_a && ea <= next) cum_a += mu.weight(p[++i]);
    if (!last_b && eb <= next) cum_b += nu.weight(q[++j]);
  }

  if (worst.integral < -kQuantileTol) return {false, worst};
  if (std::abs(integral) > kQuantileTol) return {false, QuantileViolation{1.0, integral}};
  return {true, std::monostate{}};
}

OracleVerdict martingale_feasibility(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) throw DimensionError("martingale_feasibility: dimension mismatch");
  const std::size_t n = mu.size(), m = nu.size(), d = mu.dim();

  double scale = 0.0;
  for (const auto& p : mu.points()) {
    for (double c : p) scale = std::max(scale, std::abs(c));
  }
  for (const auto& p : nu.points()) {
    for (double c : p) scale = std::max(scale, std::abs(c));
  }
  const double unit = scale > 0.0 ? scale : 1.0;

  const Point mm = mean(mu), mn = mean(nu);
  Point delta(d);
  bool mismatch = false;
  for (std::size_t a = 0; a < d; ++a) {
    delta[a] = mn[a] - mm[a];
    if (std::abs(delta[a]) > 1e-12 * unit) mismatch = true;
  }
  if (mismatch) return {false, MeanMismatch{delta}};

  if (n * m > kMaxMartingaleCells) {
    throw InvalidInput("martingale_feasibility: " + std::to_string(n) + "x" + std::to_string(m) +
                       " exceeds the dense LP size limit");
  }

  // Variables pi[i][j]; rows: n row sums, m column sums, n*d martingale
  // conditions sum_j pi[i][j] (y_j - x_i) = 0 scaled to unit length.
  const std::size_t cols = n * m;
  const std::size_t rows = n + m + n * d;
  std::vector<double> a(rows * cols, 0.0), b(rows, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t v = i * m + j;
      a[i * cols + v] = 1.0;
      a[(n + j) * cols + v] = 1.0;
      for (std::size_t k = 0; k < d; ++k) {
        a[(n + m + i * d + k) * cols + v] = (nu.point(j)[k] - mu.point(i)[k]) / unit;
      }
    }
    b[i] = mu.weight(i);
  }
  for (std::size_t j = 0; j < m; ++j) b[n + j] = nu.weight(j);

  auto res = detail::phase_one(a, b, rows, cols, 1e-9);
  if (!res.feasible) return {false, InfeasibleCoupling{res.residual}};

  // Independent check of the returned plan before trusting it.
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    Point moment(d, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double w = res.x[i * m + j];
      row += w;
      for (std::size_t k = 0; k < d; ++k) moment[k] += w * nu.point(j)[k];
    }
    worst = std::max(worst, std::abs(row - mu.weight(i)));
    for (std::size_t k = 0; k < d; ++k) {
      worst = std::max(worst, std::abs(moment[k] - mu.weight(i) * mu.point(i)[k]) / unit);
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += res.x[i * m + j];
    worst = std::max(worst, std::abs(col - nu.weight(j)));
  }
  if (worst > kMartingaleTol) {
    throw SolverError("martingale coupling violates its constraints by " + std::to_string(worst));
  }
  return {true, MartingaleCoupling{n, m, std::move(res.x)}};
}

OracleKind applicable_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() == 1 && nu.dim() == 1) return OracleKind::Quantile;
  if (mu.size() * nu.size() <= kMaxMartingaleCells) return OracleKind::Martingale;
  return OracleKind::None;
}

OracleVerdict run_oracle(OracleKind kind, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  switch (kind) {
    case OracleKind::Quantile:
      return quantile_test(mu, nu);
    case OracleKind::Martingale:
      return martingale_feasibility(mu, nu);
    case OracleKind::None:
      break;
  }
  throw InvalidInput("run_oracle: no oracle selected");
}

}  // namespace cvxorder
