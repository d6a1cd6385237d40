#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cvxorder/convex_order.hpp"
#include "cvxorder/measures.hpp"
#include "cvxorder/ot.hpp"

namespace cvxorder {

struct AffinePiece {
  Point gradient;
  double intercept = 0.0;
  Point anchor;
};

/// Max-affine convex payoff f(x) = max_i <g_i, x> + c_i together with the
/// subgradient selector that returns g_i of the lowest-index active piece.
/// The calendar spread holds -f at the first maturity, f at the second and
/// trades -grad f(x) units of the asset in between.
class CalendarSpread {
 public:
  CalendarSpread() = default;
  explicit CalendarSpread(std::vector<AffinePiece> pieces);

  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  std::size_t dim() const { return pieces_.front().gradient.size(); }

  double value(std::span<const double> x) const;
  std::size_t active_piece(std::span<const double> x) const;
  const Point& gradient(std::span<const double> x) const;
  double integrate(const DiscreteMeasure& m) const;

 private:
  std::vector<AffinePiece> pieces_;
};

struct AnchorGradient {
  Point anchor;    // atom of nu
  Point gradient;  // conditional mean of rho given that atom
};

/// Conditional expectation of the first coordinate of `plan` given each
/// atom of the second marginal; zero-mass columns are skipped.
std::vector<AnchorGradient> barycentric_projection(const TransportPlan& plan,
                                                   const std::vector<Point>& rho_points,
                                                   const std::vector<Point>& nu_points);

struct InterceptFit {
  std::vector<double> intercepts;
  std::vector<double> potentials;  // fitted values at the anchors, potentials[0] == 0
  bool used_fallback = false;      // data was not cyclically monotone
};

/// Intercepts c_j making piece j pass through (y_j, v_j), where v is the
/// longest-path solution of v_k >= v_j + <g_j, y_k - y_j> with v_0 = 0. When
/// the constraints contain a positive cycle, v falls back to the least-squares
/// integration of the gradients and each intercept is lowered to the largest
/// value keeping its piece below v at every anchor.
InterceptFit fit_intercepts(const std::vector<Point>& anchors, const std::vector<Point>& gradients);

struct ArbitrageReport {
  std::optional<CalendarSpread> spread;
  double gap = 0.0;  // integral of f over mu minus integral over nu
  std::optional<RhoCandidate> witness_rho;
  bool found = false;
  bool used_fallback = false;
  ConvexOrderReport search;
};

/// Searches for a witness rho; when the estimate is below -epsilon, builds
/// the spread from the barycentric projection of the optimal (rho*, nu) plan.
ArbitrageReport detect_arbitrage(const DiscreteMeasure& mu, const DiscreteMeasure& nu, Method method,
                                 const EstimateOptions& options);

struct SpreadDiagnostics {
  double gap = 0.0;
  double min_payoff = 0.0;  // min over test pairs of the strategy's total payoff
  std::size_t pairs = 0;
  bool ok = false;          // min_payoff >= gap - 1e-9
};

/// Evaluates u1(x) - E_mu u1 + u2(y) - E_nu u2 + Delta(x).(y - x) with
/// u1 = -f, u2 = f, Delta = -grad f on every pair.
SpreadDiagnostics verify_spread(const CalendarSpread& spread, const DiscreteMeasure& mu,
                                const DiscreteMeasure& nu,
                                const std::vector<std::pair<Point, Point>>& pairs);

/// Uniform pairs from the bounding box of both supports, enlarged by half
/// its size on every side.
std::vector<std::pair<Point, Point>> random_test_pairs(const DiscreteMeasure& mu,
                                                       const DiscreteMeasure& nu, std::size_t count,
                                                       std::uint64_t seed);

}  // namespace cvxorder
