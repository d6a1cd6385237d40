#pragma once

#include <cstddef>
#include <vector>

namespace cvxorder::detail {

struct PhaseOneResult {
  bool feasible = false;
  double residual = 0.0;  // optimal sum of artificial variables
  std::vector<double> x;  // a basic solution of A x = b, x >= 0, when feasible
};

/// Phase one of the primal simplex method on {x >= 0 : A x = b} with a dense
/// tableau. `a` is row-major rows x cols. Feasible iff the residual is at
/// most `tolerance`.
PhaseOneResult phase_one(const std::vector<double>& a, const std::vector<double>& b,
                         std::size_t rows, std::size_t cols, double tolerance = 1e-9);

}  // namespace cvxorder::detail
