#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cvxorder::detail {

struct NetworkSimplexResult {
  std::vector<double> flow;  // row-major, n x m
  std::vector<double> u;     // row potentials
  std::vector<double> v;     // column potentials, u[i] + v[j] <= c[i][j]
  double cost = 0.0;
  std::size_t pivots = 0;
};

/// Minimum-cost transportation problem on the complete bipartite graph with
/// strictly positive supplies `a` and demands `b` (equal totals). Primal
/// network simplex over a strongly feasible spanning tree rooted at an
/// artificial node, with block pricing.
NetworkSimplexResult transport_min_cost(std::span<const double> cost, std::size_t n, std::size_t m,
                                        std::span<const double> a, std::span<const double> b);

}  // namespace cvxorder::detail
