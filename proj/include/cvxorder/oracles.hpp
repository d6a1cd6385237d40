#pragma once

#include <variant>
#include <vector>

#include "cvxorder/measures.hpp"

namespace cvxorder {

/// The running integral of F_mu^-1 - F_nu^-1 dips below zero at level `x`
/// (or does not return to zero at x = 1).
struct QuantileViolation {
  double x = 0.0;
  double integral = 0.0;
};

/// Barycenters differ, so no martingale coupling can exist.
struct MeanMismatch {
  Point delta;  // mean(nu) - mean(mu)
};

/// A martingale coupling: rows are atoms of mu, columns atoms of nu.
struct MartingaleCoupling {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> plan;  // row-major
};

/// The martingale feasibility LP has no solution.
struct InfeasibleCoupling {
  double residual = 0.0;  // optimal phase-one objective
};

using OracleCertificate =
    std::variant<std::monostate, QuantileViolation, MeanMismatch, MartingaleCoupling, InfeasibleCoupling>;

struct OracleVerdict {
  bool ordered = false;
  OracleCertificate certificate;
};

/// Exact 1D test: mu <=_c nu iff the integrated quantile difference is
/// non-negative on [0, 1] and vanishes at 1. The integral is piecewise
/// linear, so it is evaluated only at the merged cdf levels of both measures.
OracleVerdict quantile_test(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Strassen test in any dimension: searches for a coupling with marginals
/// (mu, nu) whose conditional means given the first coordinate are the mu
/// atoms. Returned couplings have been checked against all constraints.
OracleVerdict martingale_feasibility(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Which exact oracle, if any, applies to the pair: quantile for d = 1,
/// martingale LP for small atomic problems.
enum class OracleKind { None, Quantile, Martingale };
OracleKind applicable_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Throws InvalidInput for OracleKind::None.
OracleVerdict run_oracle(OracleKind kind, const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace cvxorder
