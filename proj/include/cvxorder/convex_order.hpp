#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "cvxorder/measures.hpp"
#include "cvxorder/oracles.hpp"
#include "cvxorder/search.hpp"

namespace cvxorder {

/// A candidate test measure rho supported in a closed ball: either simplex
/// weights on a fixed grid, or a free uniform cloud of points.
class RhoCandidate {
 public:
  struct Grid {
    BallGrid grid;
    std::vector<double> weights;
  };
  struct Free {
    std::vector<Point> points;
    double radius = 1.0;
  };

  static RhoCandidate on_grid(BallGrid grid, std::vector<double> weights);
  static RhoCandidate free(std::vector<Point> points, double radius = 1.0);

  bool is_grid() const { return std::holds_alternative<Grid>(value_); }
  const Grid& grid() const { return std::get<Grid>(value_); }
  const Free& free_points() const { return std::get<Free>(value_); }
  std::size_t dim() const;
  DiscreteMeasure measure() const;

 private:
  explicit RhoCandidate(std::variant<Grid, Free> v) : value_(std::move(v)) {}
  std::variant<Grid, Free> value_;
};

enum class Verdict { Ordered, NotOrdered, Inconclusive };
enum class Method { IndirectHistogram, IndirectSamples, Direct };

std::string_view to_string(Verdict v);
std::string_view to_string(Method m);

struct ConvexOrderReport {
  double v_hat = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<RhoCandidate> witness_rho;
  Method method = Method::IndirectHistogram;
  std::size_t budget_used = 0;
  double epsilon = 0.0;
  std::optional<bool> oracle_agreement;
  std::optional<OracleVerdict> oracle;
  std::vector<double> trace;  // best value after each evaluation
};

struct EstimateOptions {
  std::size_t grid_size = 21;  // g, indirect methods
  std::size_t budget = 100;    // N, objective evaluations
  std::size_t atoms = 20;      // m, support size of direct candidates
  std::uint64_t seed = 0;
  double radius = 1.0;
  std::optional<double> epsilon;  // default_epsilon when unset
  bool use_oracle = true;         // consult an exact oracle for the verdict when one applies
  const SimplexOptimizer* optimizer = nullptr;  // DirichletSearch when null
};

/// C(nu, rho) - C(mu, rho).
double objective(const RhoCandidate& rho, const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// 1e-6 * (1 + M2(mu) + M2(nu)).
double default_epsilon(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// NotOrdered iff v_hat < -epsilon. Otherwise Ordered when the oracle (if
/// any) confirms, Inconclusive when it contradicts or, without an oracle,
/// when |v_hat| < epsilon.
Verdict decide(double v_hat, double epsilon, const std::optional<OracleVerdict>& oracle);

enum class IndirectMode { Histogram, Samples };

/// Minimizes the objective over rho supported on ball_grid(d, g). In samples
/// mode the inputs must be empirical (uniform-weight) measures.
ConvexOrderReport estimate_v_indirect(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                      IndirectMode mode, const EstimateOptions& options);

/// Minimizes the objective over uniform clouds of m points whose coordinates
/// are Dirichlet draws with random signs, projected radially into the ball.
ConvexOrderReport estimate_v_direct(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const EstimateOptions& options);

ConvexOrderReport estimate_v(const DiscreteMeasure& mu, const DiscreteMeasure& nu, Method method,
                             const EstimateOptions& options);

/// (M2(nu) - M2(mu)) - (W2^2(nu, rho) - W2^2(mu, rho)); non-negative for every
/// rho when mu <=_c nu.
double check_w2_inequality(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const DiscreteMeasure& rho);

/// M2(nu) - M2(mu) - W2^2(mu, nu); negative slack rules out mu <=_c nu.
double check_easy_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace cvxorder
