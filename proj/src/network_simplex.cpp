#include "network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "cvxorder/errors.hpp"

namespace cvxorder::detail {

namespace {

constexpr int kNone = -1;

// Spanning-tree bookkeeping for the bipartite transportation network.
//
// Nodes 0..n-1 are supplies, n..n+m-1 demands, n+m is the artificial root.
// Arc k < n*m joins supply k/m to demand k%m; arc n*m + u joins node u with
// the root (u -> root for supplies, root -> u for demands).
class Solver {
 public:
  Solver(std::span<const double> cost, std::size_t n, std::size_t m, std::span<const double> a,
         std::span<const double> b)
      : cost_(cost), n_(n), m_(m), nodes_(n + m + 1), real_arcs_(n * m), root_(static_cast<int>(n + m)) {
    double max_abs = 0.0;
    for (double c : cost_) max_abs = std::max(max_abs, std::abs(c));
    art_cost_ = (max_abs + 1.0) * static_cast<double>(nodes_);
    tol_ = 1e-12 * (max_abs + 1.0);

    const std::size_t arcs = real_arcs_ + n_ + m_;
    flow_.assign(arcs, 0.0);
    in_tree_.assign(arcs, 0);
    tree_arcs_.reserve(n_ + m_);
    slot_.assign(arcs, kNone);
    for (std::size_t u = 0; u < n_ + m_; ++u) {
      const std::size_t e = real_arcs_ + u;
      flow_[e] = u < n_ ? a[u] : b[u - n_];
      in_tree_[e] = 1;
      slot_[e] = static_cast<int>(tree_arcs_.size());
      tree_arcs_.push_back(static_cast<int>(e));
    }
    parent_.assign(nodes_, kNone);
    pred_.assign(nodes_, kNone);
    depth_.assign(nodes_, 0);
    pi_.assign(nodes_, 0.0);
    adj_.assign(nodes_, {});
    for (int e : tree_arcs_) {
      adj_[static_cast<std::size_t>(source(static_cast<std::size_t>(e)))].push_back(e);
      adj_[static_cast<std::size_t>(target(static_cast<std::size_t>(e)))].push_back(e);
    }
    block_ = std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(static_cast<double>(real_arcs_))));
  }

  NetworkSimplexResult run() {
    hang_subtree(root_, kNone, kNone);
    const std::size_t max_pivots = 100 * (real_arcs_ + nodes_) + 10000;
    std::size_t pivots = 0;
    for (int in = find_entering(); in != kNone; in = find_entering()) {
      if (++pivots > max_pivots) throw SolverError("network simplex exceeded its pivot limit");
      pivot(in);
    }

    NetworkSimplexResult res;
    res.pivots = pivots;
    res.flow.assign(flow_.begin(), flow_.begin() + static_cast<std::ptrdiff_t>(real_arcs_));
    double total = 0.0;
    for (std::size_t k = 0; k < real_arcs_; ++k) total += cost_[k] * res.flow[k];
    res.cost = total;
    double leftover = 0.0;
    for (std::size_t u = 0; u < n_ + m_; ++u) leftover = std::max(leftover, flow_[real_arcs_ + u]);
    if (leftover > 1e-9) {
      throw SolverError("transport problem left " + std::to_string(leftover) +
                        " mass on artificial arcs");
    }
    res.u.resize(n_);
    res.v.resize(m_);
    for (std::size_t i = 0; i < n_; ++i) res.u[i] = -pi_[i];
    for (std::size_t j = 0; j < m_; ++j) res.v[j] = pi_[n_ + j];
    return res;
  }

 private:
  int source(std::size_t e) const {
    if (e < real_arcs_) return static_cast<int>(e / m_);
    const std::size_t u = e - real_arcs_;
    return u < n_ ? static_cast<int>(u) : root_;
  }
  int target(std::size_t e) const {
    if (e < real_arcs_) return static_cast<int>(n_ + e % m_);
    const std::size_t u = e - real_arcs_;
    return u < n_ ? root_ : static_cast<int>(u);
  }
  double arc_cost(std::size_t e) const {
    if (e < real_arcs_) return cost_[e];
    return e - real_arcs_ < n_ ? 0.0 : art_cost_;
  }
  double reduced_cost(std::size_t e) const {
    return arc_cost(e) + pi_[static_cast<std::size_t>(source(e))] -
           pi_[static_cast<std::size_t>(target(e))];
  }

  // Hangs the subtree containing `top` below `parent` through arc `via` and
  // recomputes parent/pred/depth/potential for every node in it.
  void hang_subtree(int top, int parent, int via) {
    const auto t = static_cast<std::size_t>(top);
    parent_[t] = parent;
    pred_[t] = via;
    if (parent == kNone) {
      depth_[t] = 0;
      pi_[t] = 0.0;
    } else {
      const auto p = static_cast<std::size_t>(parent);
      const auto e = static_cast<std::size_t>(via);
      depth_[t] = depth_[p] + 1;
      pi_[t] = source(e) == top ? pi_[p] - arc_cost(e) : pi_[p] + arc_cost(e);
    }
    stack_.clear();
    stack_.push_back(top);
    std::size_t visited = 0;
    while (!stack_.empty()) {
      const auto u = static_cast<std::size_t>(stack_.back());
      stack_.pop_back();
      ++visited;
      for (int e : adj_[u]) {
        if (e == pred_[u]) continue;
        const auto ue = static_cast<std::size_t>(e);
        const int s = source(ue);
        const auto w = static_cast<std::size_t>(s == static_cast<int>(u) ? target(ue) : s);
        parent_[w] = static_cast<int>(u);
        pred_[w] = e;
        depth_[w] = depth_[u] + 1;
        pi_[w] = s == static_cast<int>(w) ? pi_[u] - arc_cost(ue) : pi_[u] + arc_cost(ue);
        stack_.push_back(static_cast<int>(w));
      }
    }
    if (parent == kNone && visited != nodes_) {
      throw SolverError("network simplex basis is not a spanning tree");
    }
  }

  void unlink(std::size_t node, int arc) {
    auto& list = adj_[node];
    auto it = std::find(list.begin(), list.end(), arc);
    *it = list.back();
    list.pop_back();
  }

  // Block pricing over the real arcs; returns kNone at optimality.
  int find_entering() {
    double best = -tol_;
    int best_arc = kNone;
    std::size_t scanned_in_block = 0;
    for (std::size_t step = 0; step < real_arcs_; ++step) {
      const std::size_t e = next_arc_;
      next_arc_ = next_arc_ + 1 == real_arcs_ ? 0 : next_arc_ + 1;
      if (!in_tree_[e]) {
        const double rc = reduced_cost(e);
        if (rc < best) {
          best = rc;
          best_arc = static_cast<int>(e);
        }
      }
      if (++scanned_in_block == block_) {
        if (best_arc != kNone) return best_arc;
        scanned_in_block = 0;
      }
    }
    return best_arc;
  }

  // Pushes flow around the cycle closed by `in` and swaps it into the tree,
  // choosing the leaving arc so the tree stays strongly feasible.
  void pivot(int in) {
    const auto ein = static_cast<std::size_t>(in);
    const int first = source(ein);
    const int second = target(ein);

    int u = first, v = second;
    while (u != v) {
      if (depth_[static_cast<std::size_t>(u)] >= depth_[static_cast<std::size_t>(v)]) {
        u = parent_[static_cast<std::size_t>(u)];
      } else {
        v = parent_[static_cast<std::size_t>(v)];
      }
    }
    const int join = u;

    constexpr double kInf = std::numeric_limits<double>::infinity();
    double delta = kInf;
    int leaving = kNone;
    bool on_first_side = true;
    // Flow runs join -> first along this side: arcs pointing up lose flow.
    for (int w = first; w != join; w = parent_[static_cast<std::size_t>(w)]) {
      const auto e = static_cast<std::size_t>(pred_[static_cast<std::size_t>(w)]);
      if (source(e) == w && flow_[e] < delta) {
        delta = flow_[e];
        leaving = static_cast<int>(e);
      }
    }
    // Flow runs second -> join: arcs pointing down lose flow.
    for (int w = second; w != join; w = parent_[static_cast<std::size_t>(w)]) {
      const auto e = static_cast<std::size_t>(pred_[static_cast<std::size_t>(w)]);
      if (target(e) == w && flow_[e] <= delta) {
        delta = flow_[e];
        leaving = static_cast<int>(e);
        on_first_side = false;
      }
    }
    if (leaving == kNone) throw SolverError("transport problem is unbounded");

    if (delta > 0.0) {
      flow_[ein] += delta;
      for (int w = first; w != join; w = parent_[static_cast<std::size_t>(w)]) {
        const auto e = static_cast<std::size_t>(pred_[static_cast<std::size_t>(w)]);
        flow_[e] += source(e) == w ? -delta : delta;
      }
      for (int w = second; w != join; w = parent_[static_cast<std::size_t>(w)]) {
        const auto e = static_cast<std::size_t>(pred_[static_cast<std::size_t>(w)]);
        flow_[e] += source(e) == w ? delta : -delta;
      }
    }
    const auto el = static_cast<std::size_t>(leaving);
    flow_[el] = 0.0;
    in_tree_[el] = 0;
    in_tree_[ein] = 1;
    const int s = slot_[el];
    slot_[el] = kNone;
    slot_[ein] = s;
    tree_arcs_[static_cast<std::size_t>(s)] = in;

    // The endpoint of `in` below the leaving arc is cut off with its subtree
    // and re-hung from the other endpoint.
    unlink(static_cast<std::size_t>(source(el)), leaving);
    unlink(static_cast<std::size_t>(target(el)), leaving);
    adj_[static_cast<std::size_t>(first)].push_back(in);
    adj_[static_cast<std::size_t>(second)].push_back(in);
    const int u_in = on_first_side ? first : second;
    const int v_in = on_first_side ? second : first;
    hang_subtree(u_in, v_in, in);
  }

  std::span<const double> cost_;
  std::size_t n_, m_, nodes_, real_arcs_;
  int root_;
  double art_cost_ = 0.0;
  double tol_ = 0.0;
  std::size_t block_ = 10;
  std::size_t next_arc_ = 0;

  std::vector<double> flow_;
  std::vector<std::uint8_t> in_tree_;
  std::vector<int> tree_arcs_;
  std::vector<int> slot_;

  std::vector<int> parent_, pred_, depth_;
  std::vector<double> pi_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> stack_;
};

}  // namespace

NetworkSimplexResult transport_min_cost(std::span<const double> cost, std::size_t n, std::size_t m,
                                        std::span<const double> a, std::span<const double> b) {
  if (n == 0 || m == 0) throw InvalidInput("transport problem with an empty side");
  if (cost.size() != n * m || a.size() != n || b.size() != m) {
    throw InvalidInput("transport problem dimensions do not match the cost matrix");
  }
  Solver solver(cost, n, m, a, b);
  return solver.run();
}

}  // namespace cvxorder::detail
