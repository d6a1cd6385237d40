#include "cvxorder/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "cvxorder/errors.hpp"

namespace cvxorder {

DiscreteMeasure::DiscreteMeasure(std::size_t dim, std::vector<Point> points,
                                 std::vector<double> weights)
    : dim_(dim), points_(std::move(points)), weights_(std::move(weights)) {
  if (dim_ == 0) throw InvalidInput("measure dimension must be positive");
  if (points_.empty()) throw InvalidInput("measure needs at least one atom");
  if (points_.size() != weights_.size()) {
    throw InvalidInput("measure has " + std::to_string(points_.size()) + " points but " +
                       std::to_string(weights_.size()) + " weights");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != dim_) {
      throw DimensionError("atom " + std::to_string(i) + " has " +
                           std::to_string(points_[i].size()) + " coordinates, expected " +
                           std::to_string(dim_));
    }
    for (double c : points_[i]) {
      if (!std::isfinite(c)) throw InvalidInput("non-finite coordinate in atom " + std::to_string(i));
    }
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0) {
      throw InvalidInput("weight " + std::to_string(i) + " is negative or non-finite");
    }
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidInput("weights sum to " + std::to_string(total) + ", expected 1");
  }
}

bool DiscreteMeasure::is_uniform() const {
  const double w = 1.0 / static_cast<double>(weights_.size());
  return std::all_of(weights_.begin(), weights_.end(),
                     [w](double x) { return std::abs(x - w) <= 1e-15; });
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  std::vector<Point> pts = points_;
  for (auto& p : pts) {
    for (double& c : p) c *= factor;
  }
  return {dim_, std::move(pts), weights_};
}

DiscreteMeasure from_samples(std::vector<Point> samples) {
  if (samples.empty()) throw InvalidInput("from_samples: empty sample list");
  const std::size_t n = samples.size();
  const std::size_t d = samples.front().size();
  return {d, std::move(samples), std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

DiscreteMeasure dirac(Point z) {
  const std::size_t d = z.size();
  return {d, {std::move(z)}, {1.0}};
}

double quantile(const DiscreteMeasure& m, double u) {
  if (m.dim() != 1) throw DimensionError("quantile requires a 1D measure");
  if (!(u > 0.0 && u <= 1.0)) throw InvalidInput("quantile level must lie in (0, 1]");
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return m.point(a)[0] < m.point(b)[0]; });
  double cdf = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    cdf += m.weight(order[k]);
    // Close all atoms sharing this location before comparing.
    if (k + 1 < order.size() && m.point(order[k + 1])[0] == m.point(order[k])[0]) continue;
    if (cdf >= u) return m.point(order[k])[0];
  }
  // Rounding can leave the total mass a hair below u = 1.
  return m.point(order.back())[0];
}

Point mean(const DiscreteMeasure& m) {
  Point out(m.dim(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t a = 0; a < m.dim(); ++a) out[a] += m.weight(i) * m.point(i)[a];
  }
  return out;
}

double second_moment(const DiscreteMeasure& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m.weight(i) * dot(m.point(i), m.point(i));
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::vector<Point> gaussian_samples(std::size_t n, std::size_t dim, double sigma,
                                    std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x6761u};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Point> out(n, Point(dim));
  for (auto& p : out) {
    for (double& c : p) c = sigma * normal(rng);
  }
  return out;
}

namespace {

void center_in_place(std::vector<Point>& pts) {
  const std::size_t d = pts.front().size();
  Point m(d, 0.0);
  for (const auto& p : pts) {
    for (std::size_t a = 0; a < d; ++a) m[a] += p[a];
  }
  for (double& c : m) c /= static_cast<double>(pts.size());
  for (auto& p : pts) {
    for (std::size_t a = 0; a < d; ++a) p[a] -= m[a];
  }
}

}  // namespace

std::pair<DiscreteMeasure, DiscreteMeasure> make_example(const ExampleSpec& spec) {
  const double s = spec.param;
  switch (spec.family) {
    case ExampleFamily::TwoPoint: {
      if (!(s >= -1.0 && s <= 1.0)) throw InvalidInput("two_point: s must lie in [-1, 1]");
      DiscreteMeasure mu(1, {{-1.0 - s}, {1.0 + s}}, {0.5, 0.5});
      DiscreteMeasure nu(1, {{-1.0}, {1.0}}, {0.5, 0.5});
      return {std::move(mu), std::move(nu)};
    }
    case ExampleFamily::FourPoint: {
      if (!(s >= -1.0 && s <= 1.0)) throw InvalidInput("four_point: s must lie in [-1, 1]");
      const double r = 1.0 + s;
      DiscreteMeasure mu(2, {{-r, 0.0}, {r, 0.0}, {0.0, r}, {0.0, -r}}, std::vector<double>(4, 0.25));
      DiscreteMeasure nu(2, {{-1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}},
                         std::vector<double>(4, 0.25));
      return {std::move(mu), std::move(nu)};
    }
    case ExampleFamily::GaussSampled: {
      if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidInput("gauss_sampled: sigma must be >= 0");
      if (spec.n == 0) throw InvalidInput("gauss_sampled: n must be positive");
      if (spec.dim == 0) throw InvalidInput("gauss_sampled: dim must be positive");
      auto ys = gaussian_samples(spec.n, spec.dim, 1.0, 2 * spec.seed + 2);
      if (spec.center) center_in_place(ys);
      std::vector<Point> xs;
      if (spec.shared_draws) {
        xs = ys;
        for (auto& p : xs) {
          for (double& c : p) c *= s;
        }
      } else {
        xs = gaussian_samples(spec.n, spec.dim, s, 2 * spec.seed + 1);
        if (spec.center) center_in_place(xs);
      }
      return {from_samples(std::move(xs)), from_samples(std::move(ys))};
    }
  }
  throw InvalidInput("unknown example family");
}

BallGrid ball_grid(std::size_t dim, std::size_t g, double radius) {
  if (g < 2) throw InvalidInput("ball_grid: g must be at least 2");
  if (dim == 0) throw InvalidInput("ball_grid: dim must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("ball_grid: radius must be positive");
  BallGrid grid{dim, radius, {}};
  if (dim == 1) {
    grid.nodes.reserve(g);
    for (std::size_t k = 0; k < g; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(g - 1);
      grid.nodes.push_back({radius * (2.0 * t - 1.0)});
    }
    return grid;
  }

  // Integer lattice {-k..k}^d scaled by radius/k, kept where |i| <= k.
  for (long k = 1;; ++k) {
    std::vector<std::vector<long>> cells;
    std::vector<long> idx(dim, -k);
    while (true) {
      long sq = 0;
      for (long v : idx) sq += v * v;
      if (sq <= k * k) cells.push_back(idx);
      std::size_t a = 0;
      while (a < dim && idx[a] == k) idx[a++] = -k;
      if (a == dim) break;
      ++idx[a];
    }
    if (cells.size() < g) continue;
    auto sqnorm = [](const std::vector<long>& v) {
      long s = 0;
      for (long x : v) s += x * x;
      return s;
    };
    std::sort(cells.begin(), cells.end(), [&](const auto& a, const auto& b) {
      const long na = sqnorm(a), nb = sqnorm(b);
      return na != nb ? na < nb : a < b;
    });
    cells.resize(g);
    const double pitch = radius / static_cast<double>(k);
    for (const auto& c : cells) {
      Point p(dim);
      for (std::size_t a = 0; a < dim; ++a) p[a] = pitch * static_cast<double>(c[a]);
      grid.nodes.push_back(std::move(p));
    }
    return grid;
  }
}

}  // namespace cvxorder
