#include "dense_simplex.hpp"

#include <cmath>
#include <limits>

#include "cvxorder/errors.hpp"

namespace cvxorder::detail {

namespace {

constexpr double kPivotTol = 1e-11;

}  // namespace

PhaseOneResult phase_one(const std::vector<double>& a, const std::vector<double>& b,
                         std::size_t rows, std::size_t cols, double tolerance) {
  if (a.size() != rows * cols || b.size() != rows) throw InvalidInput("phase one: shape mismatch");
  const std::size_t width = cols + rows + 1;  // structural | artificial | rhs
  if (static_cast<double>(rows + 1) * static_cast<double>(width) > 5e7) {
    throw InvalidInput("phase one: problem too large for the dense tableau");
  }
  std::vector<double> t((rows + 1) * width, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * width + c]; };
  std::vector<std::size_t> basis(rows);

  for (std::size_t r = 0; r < rows; ++r) {
    const double sgn = b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < cols; ++c) at(r, c) = sgn * a[r * cols + c];
    at(r, cols + r) = 1.0;
    at(r, width - 1) = sgn * b[r];
    basis[r] = cols + r;
  }
  // Objective row holds reduced costs of "minimize sum of artificials".
  const std::size_t obj = rows;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) at(obj, c) -= at(r, c);
    at(obj, width - 1) -= at(r, width - 1);
  }

  const std::size_t max_iter = 50 * (rows + cols) + 1000;
  std::size_t degenerate_run = 0;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_iter) throw SolverError("phase one exceeded its iteration limit");
    // Dantzig pricing; Bland's rule after a run of degenerate pivots.
    const bool bland = degenerate_run > 50;
    std::size_t enter = width;
    double best = -kPivotTol;
    for (std::size_t c = 0; c + 1 < width; ++c) {
      const double rc = at(obj, c);
      if (rc < best) {
        enter = c;
        best = rc;
        if (bland) break;
      }
    }
    if (enter == width) break;

    std::size_t leave = rows;
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      const double p = at(r, enter);
      if (p <= kPivotTol) continue;
      const double q = at(r, width - 1) / p;
      if (q < ratio - 1e-15 || (q <= ratio + 1e-15 && leave < rows && basis[r] < basis[leave])) {
        ratio = q;
        leave = r;
      }
    }
    if (leave == rows) break;  // unbounded direction; cannot happen in phase one
    degenerate_run = ratio <= 1e-15 ? degenerate_run + 1 : 0;

    const double p = at(leave, enter);
    for (std::size_t c = 0; c < width; ++c) at(leave, c) /= p;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) at(r, c) -= f * at(leave, c);
      at(r, enter) = 0.0;
    }
    basis[leave] = enter;
  }

  PhaseOneResult res;
  res.residual = std::max(0.0, -at(obj, width - 1));
  res.feasible = res.residual <= tolerance;
  res.x.assign(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] < cols) res.x[basis[r]] = std::max(0.0, at(r, width - 1));
  }
  return res;
}

}  // namespace cvxorder::detail
