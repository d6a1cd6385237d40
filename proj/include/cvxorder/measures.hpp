#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace cvxorder {

using Point = std::vector<double>;

/// A finitely supported probability measure on R^d.
///
/// Atoms are never merged: duplicate points are kept as separate atoms and
/// their masses add up implicitly in every integral. Instances are immutable
/// once constructed.
class DiscreteMeasure {
 public:
  /// Validates and takes ownership. Throws InvalidInput on negative,
  /// non-finite or non-normalized weights (tolerance 1e-12), DimensionError
  /// when a point does not have `dim` coordinates.
  DiscreteMeasure(std::size_t dim, std::vector<Point> points, std::vector<double> weights);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// True when every atom carries mass 1/n (an empirical measure).
  bool is_uniform() const;

  /// Same atoms with every coordinate multiplied by `factor`.
  DiscreteMeasure scaled(double factor) const;

 private:
  std::size_t dim_;
  std::vector<Point> points_;
  std::vector<double> weights_;
};

/// Empirical measure of a sample: uniform weights 1/n, duplicates kept.
DiscreteMeasure from_samples(std::vector<Point> samples);

/// Dirac mass at `z`.
DiscreteMeasure dirac(Point z);

/// Generalized inverse cdf inf{y : m((-inf, y]) >= u} of a 1D measure.
double quantile(const DiscreteMeasure& m, double u);

Point mean(const DiscreteMeasure& m);
double second_moment(const DiscreteMeasure& m);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

enum class ExampleFamily { GaussSampled, TwoPoint, FourPoint };

struct ExampleSpec {
  ExampleFamily family = ExampleFamily::TwoPoint;
  /// sigma (standard deviation of mu) for GaussSampled, s for the atomic families.
  double param = 0.0;
  std::size_t n = 500;    // GaussSampled only
  std::size_t dim = 1;    // GaussSampled only; FourPoint is always 2D
  std::uint64_t seed = 0;
  /// GaussSampled: subtract each sample's empirical mean so mu and nu share
  /// their barycenter exactly.
  bool center = true;
  /// GaussSampled: build mu by scaling the draws behind nu (common random
  /// numbers) instead of drawing a second independent sample.
  bool shared_draws = true;
};

/// The three benchmark families:
///   GaussSampled  mu = N(0, param^2 I), nu = N(0, I), empirical with n draws each
///   TwoPoint      mu = (d_{-1-s} + d_{1+s}) / 2, nu = (d_{-1} + d_1) / 2
///   FourPoint     mu, nu = uniform on the axis points at radius 1+s and 1 in R^2
std::pair<DiscreteMeasure, DiscreteMeasure> make_example(const ExampleSpec& spec);

/// n i.i.d. N(0, sigma^2 I) draws in R^dim from a seeded generator.
std::vector<Point> gaussian_samples(std::size_t n, std::size_t dim, double sigma, std::uint64_t seed);

/// Nodes of a grid of the closed ball of radius `radius` in R^d.
struct BallGrid {
  std::size_t dim = 1;
  double radius = 1.0;
  std::vector<Point> nodes;
};

/// d = 1: g equidistant points on [-radius, radius] including the endpoints.
/// d >= 2: the cubic lattice of pitch radius/k for the smallest k whose ball
/// intersection has at least g nodes, truncated to the g nodes nearest the
/// origin (ties broken lexicographically).
BallGrid ball_grid(std::size_t dim, std::size_t g, double radius = 1.0);

}  // namespace cvxorder
