#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace embedgeo {

using Vector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;

struct Ball {
  Vector center;
  double radius = 0.0;
  // Indices into the input of the points that pin the ball.
  std::vector<std::size_t> support;
};

struct MebOptions {
  double tol = kDefaultTol;
  // Reduced (affine hull) dimensions up to this limit use the exact
  // move-to-front solver; above it the (1+tol) core-set iteration runs.
  std::size_t exact_dim_limit = 12;
};

/// Smallest ball containing every point. The problem is first reduced to
/// the affine hull of the input, so n points in any ambient dimension are
/// solved in at most n-1 dimensions. The returned radius is the largest
/// ambient distance from the returned center, hence containment is exact
/// and the radius overshoots the optimum by at most a factor (1 + tol).
Ball min_enclosing_ball(std::span<const Vector> points, double tol = kDefaultTol);
Ball min_enclosing_ball(std::span<const Vector> points, const MebOptions& options);

/// Dimension of the affine hull of `points` (0 for a single point).
std::size_t affine_dimension(std::span<const Vector> points);

struct PairwiseDistanceStats {
  double avg = 0.0;
  double max = 0.0;
  // Population variance over the n(n-1)/2 unordered pairs.
  double var = 0.0;
};

PairwiseDistanceStats pairwise_distance_stats(std::span<const Vector> points);

double avg_norm(std::span<const Vector> points);

struct PcaResult {
  // One k-dimensional vector per input point, in input order.
  std::vector<Vector> projections;
  // Sample variance (divisor n-1) along each retained axis, nonincreasing.
  std::vector<double> explained_variance;
  // dim x k, orthonormal columns; each column's largest-magnitude entry is
  // positive.
  Eigen::MatrixXd components;
  // Sum of per-coordinate sample variances of the input.
  double total_variance = 0.0;
};

/// Mean-centered projection onto the top-k principal axes. When there are
/// fewer points than dimensions the eigenproblem is solved on the n x n Gram
/// matrix instead of the dim x dim covariance.
PcaResult pca_project(std::span<const Vector> points, std::size_t k);

/// Indices of the convex hull vertices in counter-clockwise order, starting
/// from the lowest-x (then lowest-y) point. Collinear boundary points are
/// dropped; fully collinear input yields the two extreme points.
std::vector<std::size_t> convex_hull_2d(std::span<const Vector> points);

/// Shoelace area of the 2D convex hull; 0 for collinear input.
double convex_hull_area_2d(std::span<const Vector> points);

struct VariationReport {
  double radius_meb = 0.0;
  double avg_pairwise_dist = 0.0;
  double max_pairwise_dist = 0.0;
  double var_pairwise_dist = 0.0;
  double avg_norm = 0.0;
  double hull_area_2d = 0.0;
};

/// All variation metrics of one point set. The hull area is measured after
/// a 2-component PCA projection; sets of two points (or 1-dimensional
/// embeddings) have no area and report 0.
VariationReport variation_report(std::span<const Vector> points,
                                 double tol = kDefaultTol);

namespace detail {

// Throws EmptyInput / DimensionMismatch / NonFiniteInput. Returns the shared
// dimension.
std::size_t validate_points(std::span<const Vector> points);

}  // namespace detail

}  // namespace embedgeo
