#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "embedgeo/error.hpp"
#include "embedgeo/geometry.hpp"

namespace embedgeo {

PairwiseDistanceStats pairwise_distance_stats(std::span<const Vector> points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::FewerThanTwoPoints, "pairwise statistics need at least 2 points");
  }
  detail::validate_points(points);

  std::vector<double> dists;
  dists.reserve(points.size() * (points.size() - 1) / 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      dists.push_back((points[i] - points[j]).norm());
    }
  }
  PairwiseDistanceStats stats;
  const double count = static_cast<double>(dists.size());
  stats.avg = std::accumulate(dists.begin(), dists.end(), 0.0) / count;
  stats.max = *std::max_element(dists.begin(), dists.end());
  double ss = 0.0;
  for (double d : dists) ss += (d - stats.avg) * (d - stats.avg);
  stats.var = ss / count;
  return stats;
}

double avg_norm(std::span<const Vector> points) {
  detail::validate_points(points);
  double total = 0.0;
  for (const auto& p : points) total += p.norm();
  return total / static_cast<double>(points.size());
}

PcaResult pca_project(std::span<const Vector> points, std::size_t k) {
  if (points.size() < 2) {
    throw Error(ErrorCode::FewerThanTwoPoints, "PCA needs at least 2 points");
  }
  const auto dim = detail::validate_points(points);
  const std::size_t max_k = std::min(points.size() - 1, dim);
  if (k == 0 || k > max_k) {
    throw Error(ErrorCode::KTooLarge, "k=" + std::to_string(k) + " outside [1, " +
                                          std::to_string(max_k) + "]");
  }

  const auto n = static_cast<Eigen::Index>(points.size());
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) = points[static_cast<std::size_t>(i)].transpose();
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const double denom = static_cast<double>(n - 1);

  PcaResult result;
  result.total_variance = x.squaredNorm() / denom;
  result.components = Eigen::MatrixXd::Zero(d, static_cast<Eigen::Index>(k));

  // Eigenpairs sorted by decreasing eigenvalue.
  Eigen::VectorXd values;
  Eigen::MatrixXd axes(d, static_cast<Eigen::Index>(k));
  if (n < d) {
    const Eigen::MatrixXd gram = x * x.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    values = eig.eigenvalues().reverse();
    const Eigen::MatrixXd u = eig.eigenvectors().rowwise().reverse();
    const double floor = std::max(values(0), 0.0) * 1e-13;
    std::size_t filled = 0;
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(k); ++c) {
      if (values(c) > floor && values(c) > 0.0) {
        axes.col(c) = x.transpose() * u.col(c) / std::sqrt(values(c));
        ++filled;
      } else {
        axes.col(c).setZero();
      }
    }
    // Null-variance axes: complete the basis with orthogonalised unit vectors.
    for (auto c = static_cast<Eigen::Index>(filled); c < static_cast<Eigen::Index>(k); ++c) {
      for (Eigen::Index e = 0; e < d; ++e) {
        Vector candidate = Vector::Unit(d, e);
        for (Eigen::Index prev = 0; prev < c; ++prev) candidate -= axes.col(prev).dot(candidate) * axes.col(prev);
        if (candidate.norm() > 0.5) {
          axes.col(c) = candidate.normalized();
          break;
        }
      }
    }
  } else {
    const Eigen::MatrixXd scatter = x.transpose() * x;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scatter);
    values = eig.eigenvalues().reverse();
    axes = eig.eigenvectors().rowwise().reverse().leftCols(static_cast<Eigen::Index>(k));
  }

  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(k); ++c) {
    Eigen::Index largest = 0;
    axes.col(c).cwiseAbs().maxCoeff(&largest);
    if (axes(largest, c) < 0.0) axes.col(c) *= -1.0;
    result.explained_variance.push_back(std::max(values(c), 0.0) / denom);
  }
  result.components = axes;

  const Eigen::MatrixXd proj = x * axes;
  result.projections.reserve(points.size());
  for (Eigen::Index i = 0; i < n; ++i) result.projections.emplace_back(proj.row(i).transpose());
  return result;
}

namespace {

double cross(const Vector& o, const Vector& a, const Vector& b) {
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

void validate_planar(std::span<const Vector> points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::FewerThanThreePoints, "hull area needs at least 3 points");
  }
  if (detail::validate_points(points) != 2) {
    throw Error(ErrorCode::DimensionMismatch, "hull area requires 2-dimensional points");
  }
}

}  // namespace

std::vector<std::size_t> convex_hull_2d(std::span<const Vector> points) {
  validate_planar(points);
  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (points[a](0) != points[b](0)) return points[a](0) < points[b](0);
    return points[a](1) < points[b](1);
  });
  idx.erase(std::unique(idx.begin(), idx.end(),
                        [&](std::size_t a, std::size_t b) { return points[a] == points[b]; }),
            idx.end());
  if (idx.size() < 3) return idx;

  // Andrew's monotone chain; pops on cross <= 0 so collinear points drop out.
  std::vector<std::size_t> hull(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i : idx) {
    while (k >= 2 && cross(points[hull[k - 2]], points[hull[k - 1]], points[i]) <= 0.0) --k;
    hull[k++] = i;
  }
  for (std::size_t j = idx.size() - 1, t = k + 1; j-- > 0;) {
    const std::size_t i = idx[j];
    while (k >= t && cross(points[hull[k - 2]], points[hull[k - 1]], points[i]) <= 0.0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

double convex_hull_area_2d(std::span<const Vector> points) {
  const auto hull = convex_hull_2d(points);
  if (hull.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vector& a = points[hull[i]];
    const Vector& b = points[hull[(i + 1) % hull.size()]];
    twice += a(0) * b(1) - a(1) * b(0);
  }
  return std::abs(twice) / 2.0;
}

VariationReport variation_report(std::span<const Vector> points, double tol) {
  if (points.size() < 2) {
    throw Error(ErrorCode::FewerThanTwoPoints, "variation metrics need at least 2 points");
  }
  const auto dim = detail::validate_points(points);
  VariationReport report;
  report.radius_meb = min_enclosing_ball(points, tol).radius;
  const auto pairwise = pairwise_distance_stats(points);
  report.avg_pairwise_dist = pairwise.avg;
  report.max_pairwise_dist = pairwise.max;
  report.var_pairwise_dist = pairwise.var;
  report.avg_norm = avg_norm(points);
  if (points.size() >= 3 && dim >= 2) {
    const auto pca = pca_project(points, 2);
    report.hull_area_2d = convex_hull_area_2d(pca.projections);
  }
  return report;
}

}  // namespace embedgeo
