#include "cvxorder/arbitrage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cvxorder/errors.hpp"
#include "cvxorder/search.hpp"

namespace cvxorder {

CalendarSpread::CalendarSpread(std::vector<AffinePiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw InvalidInput("calendar spread needs at least one piece");
  const std::size_t d = pieces_.front().gradient.size();
  for (const auto& p : pieces_) {
    if (p.gradient.size() != d || p.anchor.size() != d) {
      throw DimensionError("calendar spread pieces have mixed dimensions");
    }
  }
}

std::size_t CalendarSpread::active_piece(std::span<const double> x) const {
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double v = dot(pieces_[i].gradient, x) + pieces_[i].intercept;
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

double CalendarSpread::value(std::span<const double> x) const {
  const auto& p = pieces_[active_piece(x)];
  return dot(p.gradient, x) + p.intercept;
}

const Point& CalendarSpread::gradient(std::span<const double> x) const {
  return pieces_[active_piece(x)].gradient;
}

double CalendarSpread::integrate(const DiscreteMeasure& m) const {
  if (m.dim() != dim()) throw DimensionError("spread and measure dimensions differ");
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m.weight(i) * value(m.point(i));
  return s;
}

std::vector<AnchorGradient> barycentric_projection(const TransportPlan& plan,
                                                   const std::vector<Point>& rho_points,
                                                   const std::vector<Point>& nu_points) {
  if (plan.rows == 0 || plan.cols == 0 || plan.matrix.empty()) {
    throw InvalidInput("barycentric_projection: empty plan");
  }
  if (rho_points.size() != plan.rows || nu_points.size() != plan.cols) {
    throw InvalidInput("barycentric_projection: plan shape does not match the supports");
  }
  const std::size_t d = rho_points.front().size();
  std::vector<AnchorGradient> out;
  for (std::size_t j = 0; j < plan.cols; ++j) {
    double mass = 0.0;
    Point g(d, 0.0);
    for (std::size_t i = 0; i < plan.rows; ++i) {
      const double w = plan(i, j);
      if (w <= 0.0) continue;
      mass += w;
      for (std::size_t a = 0; a < d; ++a) g[a] += w * rho_points[i][a];
    }
    if (mass <= 0.0) continue;
    for (double& c : g) c /= mass;
    out.push_back({nu_points[j], std::move(g)});
  }
  return out;
}

InterceptFit fit_intercepts(const std::vector<Point>& anchors, const std::vector<Point>& gradients) {
  if (anchors.empty()) throw InvalidInput("fit_intercepts: no anchors");
  if (anchors.size() != gradients.size()) throw InvalidInput("fit_intercepts: one gradient per anchor");
  const std::size_t m = anchors.size();

  // w[j][k] = <g_j, y_k - y_j>: lower bound on v_k - v_j.
  std::vector<double> w(m * m);
  double scale = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double own = dot(gradients[j], anchors[j]);
    for (std::size_t k = 0; k < m; ++k) {
      w[j * m + k] = dot(gradients[j], anchors[k]) - own;
      scale = std::max(scale, std::abs(w[j * m + k]));
    }
  }
  const double tol = 1e-12 * (1.0 + scale);

  InterceptFit fit;
  std::vector<double>& v = fit.potentials;
  v.assign(m, -std::numeric_limits<double>::infinity());
  v[0] = 0.0;
  bool changed = true;
  for (std::size_t round = 0; round < m && changed; ++round) {
    changed = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (!std::isfinite(v[j])) continue;
      for (std::size_t k = 0; k < m; ++k) {
        const double cand = v[j] + w[j * m + k];
        if (cand > v[k] + tol) {
          v[k] = cand;
          changed = true;
        }
      }
    }
  }
  // Still relaxing after m rounds, or v_0 pushed above its anchor: a
  // positive cycle, so the gradients are not cyclically monotone.
  fit.used_fallback = changed || v[0] > tol;

  fit.intercepts.resize(m);
  if (!fit.used_fallback) {
    v[0] = 0.0;
    for (std::size_t j = 0; j < m; ++j) fit.intercepts[j] = v[j] - dot(gradients[j], anchors[j]);
    return fit;
  }

  // Least-squares integration on the complete graph with trapezoid
  // increments t_jk = <g_j + g_k, y_k - y_j> / 2 has the closed form
  // v_k = mean_j t_jk (up to a constant).
  for (std::size_t k = 0; k < m; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += 0.5 * (w[j * m + k] - w[k * m + j]);
    v[k] = s / static_cast<double>(m);
  }
  const double v0 = v[0];
  for (double& x : v) x -= v0;
  for (std::size_t i = 0; i < m; ++i) {
    double c = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) c = std::min(c, v[j] - dot(gradients[i], anchors[j]));
    fit.intercepts[i] = c;
  }
  return fit;
}

ArbitrageReport detect_arbitrage(const DiscreteMeasure& mu, const DiscreteMeasure& nu, Method method,
                                 const EstimateOptions& options) {
  ArbitrageReport rep;
  rep.search = estimate_v(mu, nu, method, options);
  rep.witness_rho = rep.search.witness_rho;
  if (!(rep.search.v_hat < -rep.search.epsilon) || !rep.witness_rho) return rep;

  const DiscreteMeasure rho = rep.witness_rho->measure();
  const TransportPlan plan = max_covariance_plan(rho, nu);
  const auto projected = barycentric_projection(plan, rho.points(), nu.points());

  std::vector<Point> anchors, gradients;
  anchors.reserve(projected.size());
  gradients.reserve(projected.size());
  for (const auto& p : projected) {
    anchors.push_back(p.anchor);
    gradients.push_back(p.gradient);
  }
  const InterceptFit fit = fit_intercepts(anchors, gradients);
  std::vector<AffinePiece> pieces;
  pieces.reserve(anchors.size());
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    pieces.push_back({gradients[j], fit.intercepts[j], anchors[j]});
  }
  rep.spread = CalendarSpread(std::move(pieces));
  rep.used_fallback = fit.used_fallback;
  rep.gap = rep.spread->integrate(mu) - rep.spread->integrate(nu);
  rep.found = rep.gap > 0.0;
  return rep;
}

SpreadDiagnostics verify_spread(const CalendarSpread& spread, const DiscreteMeasure& mu,
                                const DiscreteMeasure& nu,
                                const std::vector<std::pair<Point, Point>>& pairs) {
  const double price_u1 = -spread.integrate(mu);
  const double price_u2 = spread.integrate(nu);
  SpreadDiagnostics diag;
  diag.gap = spread.integrate(mu) - spread.integrate(nu);
  diag.pairs = pairs.size();
  diag.min_payoff = std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : pairs) {
    const double u1 = -spread.value(x);
    const double u2 = spread.value(y);
    const Point& g = spread.gradient(x);
    double hedge = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) hedge += -g[a] * (y[a] - x[a]);
    diag.min_payoff = std::min(diag.min_payoff, u1 - price_u1 + u2 - price_u2 + hedge);
  }
  diag.ok = pairs.empty() || diag.min_payoff >= diag.gap - 1e-9;
  return diag;
}

std::vector<std::pair<Point, Point>> random_test_pairs(const DiscreteMeasure& mu,
                                                       const DiscreteMeasure& nu, std::size_t count,
                                                       std::uint64_t seed) {
  if (mu.dim() != nu.dim()) throw DimensionError("random_test_pairs: dimension mismatch");
  const std::size_t d = mu.dim();
  Point lo(d, std::numeric_limits<double>::infinity()), hi(d, -std::numeric_limits<double>::infinity());
  for (const auto* m : {&mu, &nu}) {
    for (const auto& p : m->points()) {
      for (std::size_t a = 0; a < d; ++a) {
        lo[a] = std::min(lo[a], p[a]);
        hi[a] = std::max(hi[a], p[a]);
      }
    }
  }
  std::vector<std::uniform_real_distribution<double>> axis;
  for (std::size_t a = 0; a < d; ++a) {
    const double pad = 0.5 * std::max(hi[a] - lo[a], 1.0);
    axis.emplace_back(lo[a] - pad, hi[a] + pad);
  }
  Rng rng = make_rng(seed, 0x7e57u);
  std::vector<std::pair<Point, Point>> out(count, {Point(d), Point(d)});
  for (auto& [x, y] : out) {
    for (std::size_t a = 0; a < d; ++a) x[a] = axis[a](rng);
    for (std::size_t a = 0; a < d; ++a) y[a] = axis[a](rng);
  }
  return out;
}

}  // namespace cvxorder
