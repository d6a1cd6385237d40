#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cvxorder/measures.hpp"

namespace cvxorder {

/// Dense row-major cost matrix.
class CostMatrix {
 public:
  CostMatrix() = default;
  /// Throws InvalidInput on non-finite entries or a size mismatch.
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return c_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const { return {c_.data() + i * cols_, cols_}; }
  const std::vector<double>& data() const { return c_; }

  /// <x_i, y_j>
  static CostMatrix inner_product(const DiscreteMeasure& x, const DiscreteMeasure& y);
  /// |x_i - y_j|^2
  static CostMatrix squared_euclidean(const DiscreteMeasure& x, const DiscreteMeasure& y);
  /// |x_i - y_j|
  static CostMatrix euclidean(const DiscreteMeasure& x, const DiscreteMeasure& y);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> c_;
};

enum class Sense { Min, Max };

/// Optimal coupling of two weight vectors together with a dual certificate.
///
/// For Min the potentials satisfy dual_f[i] + dual_g[j] <= c[i][j], for Max
/// the reverse inequality; both are tight wherever the plan carries mass.
/// Potentials are shifted so that dual_g[0] == 0.
struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> matrix;  // row-major, rows x cols
  double primal_value = 0.0;
  std::vector<double> dual_f;
  std::vector<double> dual_g;
  Sense sense = Sense::Min;

  double operator()(std::size_t i, std::size_t j) const { return matrix[i * cols + j]; }
  double dual_value(std::span<const double> a, std::span<const double> b) const;
};

/// Exact optimum of the transportation LP. Zero-weight rows and columns are
/// removed before solving and reinserted as zero rows/columns of the plan.
TransportPlan solve_transport(const CostMatrix& cost, std::span<const double> a,
                              std::span<const double> b, Sense sense);

/// C(mu, rho) = sup over couplings of the integral of <x, y>.
double max_covariance(const DiscreteMeasure& mu, const DiscreteMeasure& rho);
/// Optimal Max-sense plan for <x, y> between the two measures (mu on rows).
TransportPlan max_covariance_plan(const DiscreteMeasure& mu, const DiscreteMeasure& rho);

double wasserstein2_sq(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
double wasserstein1(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// W2^2 in one dimension through the comonotone (sorted quantile) coupling.
double wasserstein2_sq_quantile(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace cvxorder
