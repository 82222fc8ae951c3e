#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <string>

#include "embedgeo/error.hpp"
#include "embedgeo/geometry.hpp"

namespace embedgeo {

namespace detail {

std::size_t validate_points(std::span<const Vector> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "no points given");
  const auto dim = static_cast<std::size_t>(points.front().size());
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "zero-dimensional point");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (static_cast<std::size_t>(points[i].size()) != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "point " + std::to_string(i) + " has dimension " +
                      std::to_string(points[i].size()) + ", expected " +
                      std::to_string(dim));
    }
    if (!points[i].allFinite()) {
      throw Error(ErrorCode::NonFiniteInput,
                  "point " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
  return dim;
}

}  // namespace detail

namespace {

// Coordinates of the input inside its own affine hull: p_i ~ origin + basis * coords.col(i).
struct AffineFrame {
  Vector origin;
  Eigen::MatrixXd basis;   // dim x r, orthonormal columns
  Eigen::MatrixXd coords;  // r x n
};

AffineFrame reduce_to_affine_hull(std::span<const Vector> points, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(points.size());
  AffineFrame frame;
  frame.origin = Vector::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& p : points) frame.origin += p;
  frame.origin /= static_cast<double>(n);

  Eigen::MatrixXd centered(static_cast<Eigen::Index>(dim), n);
  for (Eigen::Index i = 0; i < n; ++i) centered.col(i) = points[static_cast<std::size_t>(i)] - frame.origin;

  const double scale = centered.cwiseAbs().maxCoeff();
  if (n == 1 || scale == 0.0) {
    frame.basis.resize(static_cast<Eigen::Index>(dim), 0);
    frame.coords.resize(0, n);
    return frame;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(centered);
  qr.setThreshold(64.0 * std::numeric_limits<double>::epsilon());
  const Eigen::Index rank = qr.rank();
  Eigen::MatrixXd q = qr.householderQ();
  frame.basis = q.leftCols(rank);
  frame.coords = frame.basis.transpose() * centered;
  return frame;
}

// Circumcenter of `boundary` inside its affine hull. Empty boundary gives an
// empty ball (negative squared radius).
void circumball(const Eigen::MatrixXd& pts, const std::vector<Eigen::Index>& boundary,
                Vector& center, double& sqr_radius) {
  const Eigen::Index r = pts.rows();
  if (boundary.empty()) {
    center = Vector::Zero(r);
    sqr_radius = -1.0;
    return;
  }
  const Vector base = pts.col(boundary.front());
  const auto m = static_cast<Eigen::Index>(boundary.size()) - 1;
  if (m == 0) {
    center = base;
    sqr_radius = 0.0;
    return;
  }
  Eigen::MatrixXd v(r, m);
  for (Eigen::Index j = 0; j < m; ++j) v.col(j) = pts.col(boundary[static_cast<std::size_t>(j + 1)]) - base;
  const Eigen::MatrixXd gram = v.transpose() * v;
  const Vector rhs = 0.5 * gram.diagonal();
  const Vector lambda = gram.colPivHouseholderQr().solve(rhs);
  center = base + v * lambda;
  sqr_radius = 0.0;
  for (auto idx : boundary) sqr_radius = std::max(sqr_radius, (pts.col(idx) - center).squaredNorm());
}

// Move-to-front Welzl recursion over the reduced coordinates.
class MoveToFrontSolver {
 public:
  MoveToFrontSolver(const Eigen::MatrixXd& pts, double tol)
      : pts_(pts), slack_((1.0 + tol) * (1.0 + tol)) {
    for (Eigen::Index i = 0; i < pts.cols(); ++i) order_.push_back(i);
    center_ = Vector::Zero(pts.rows());
  }

  void solve() {
    boundary_.clear();
    recurse(order_.end());
  }

  const Vector& center() const { return center_; }
  const std::vector<Eigen::Index>& support() const { return support_; }

 private:
  void recurse(std::list<Eigen::Index>::iterator end) {
    circumball(pts_, boundary_, center_, sqr_radius_);
    support_ = boundary_;
    if (static_cast<Eigen::Index>(boundary_.size()) == pts_.rows() + 1) return;
    for (auto it = order_.begin(); it != end;) {
      auto current = it++;
      if (!contains(*current)) {
        boundary_.push_back(*current);
        recurse(current);
        boundary_.pop_back();
        order_.splice(order_.begin(), order_, current);
      }
    }
  }

  bool contains(Eigen::Index i) const {
    if (sqr_radius_ < 0.0) return false;
    return (pts_.col(i) - center_).squaredNorm() <= sqr_radius_ * slack_;
  }

  const Eigen::MatrixXd& pts_;
  double slack_;
  std::list<Eigen::Index> order_;
  std::vector<Eigen::Index> boundary_;
  std::vector<Eigen::Index> support_;
  Vector center_;
  double sqr_radius_ = -1.0;
};

// Drops support points whose barycentric weight in the center vanishes; the
// ball of the remaining points is the same ball.
std::vector<Eigen::Index> prune_support(const Eigen::MatrixXd& pts,
                                        std::vector<Eigen::Index> support,
                                        const Vector& center) {
  while (support.size() > 1) {
    const Vector base = pts.col(support.front());
    const auto m = static_cast<Eigen::Index>(support.size()) - 1;
    Eigen::MatrixXd v(pts.rows(), m);
    for (Eigen::Index j = 0; j < m; ++j) v.col(j) = pts.col(support[static_cast<std::size_t>(j + 1)]) - base;
    const Vector lambda = v.colPivHouseholderQr().solve(center - base);
    Vector weights(m + 1);
    weights(0) = 1.0 - lambda.sum();
    weights.tail(m) = lambda;
    Eigen::Index weakest = 0;
    const double w_min = weights.minCoeff(&weakest);
    if (w_min > 1e-10) break;
    support.erase(support.begin() + weakest);
  }
  return support;
}

// Frank-Wolfe iteration with away steps on the dual simplex; stops once every
// point is within (1+tol) of the dual radius estimate.
void core_set_iteration(const Eigen::MatrixXd& pts, double tol, Vector& center,
                        std::vector<Eigen::Index>& support) {
  const Eigen::Index n = pts.cols();
  Vector weights = Vector::Zero(n);
  const Vector sq_norms = pts.colwise().squaredNorm().transpose();

  // Initial core set: the two points spanning an approximate diameter.
  Eigen::Index a = 0;
  (pts.colwise() - pts.col(0)).colwise().squaredNorm().maxCoeff(&a);
  Eigen::Index b = a;
  (pts.colwise() - pts.col(a)).colwise().squaredNorm().maxCoeff(&b);
  weights(a) += 0.5;
  weights(b) += 0.5;

  const double stop = (1.0 + tol) * (1.0 + tol) - 1.0;
  constexpr int kMaxIterations = 2'000'000;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    center = pts * weights;
    const double phi = weights.dot(sq_norms) - center.squaredNorm();
    const Vector dist = (pts.colwise() - center).colwise().squaredNorm().transpose();
    if (phi <= 0.0) {
      if (dist.maxCoeff() == 0.0) break;
    }
    Eigen::Index far = 0;
    const double far_d = dist.maxCoeff(&far);
    Eigen::Index near = -1;
    double near_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (weights(i) > 0.0 && dist(i) < near_d) {
        near_d = dist(i);
        near = i;
      }
    }
    const double scale = std::max(phi, std::numeric_limits<double>::min());
    const double delta_plus = far_d / scale - 1.0;
    const double delta_minus = 1.0 - near_d / scale;
    if (std::max(delta_plus, delta_minus) <= stop) break;
    if (delta_plus >= delta_minus) {
      const double step = delta_plus / (2.0 * (1.0 + delta_plus));
      weights *= (1.0 - step);
      weights(far) += step;
    } else {
      const double w = weights(near);
      const double step = std::min(delta_minus / (2.0 * (1.0 - delta_minus)), w / (1.0 - w));
      weights *= (1.0 + step);
      weights(near) -= step;
      if (weights(near) < 1e-300) weights(near) = 0.0;
    }
  }
  center = pts * weights;
  support.clear();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights(i) > 0.0) support.push_back(i);
  }
}

}  // namespace

std::size_t affine_dimension(std::span<const Vector> points) {
  const auto dim = detail::validate_points(points);
  return static_cast<std::size_t>(reduce_to_affine_hull(points, dim).basis.cols());
}

Ball min_enclosing_ball(std::span<const Vector> points, double tol) {
  return min_enclosing_ball(points, MebOptions{tol, 12});
}

Ball min_enclosing_ball(std::span<const Vector> points, const MebOptions& options) {
  if (!(options.tol > 0.0 && options.tol <= 1e-3)) {
    throw Error(ErrorCode::InvalidTolerance, "tolerance must lie in (0, 1e-3]");
  }
  const auto dim = detail::validate_points(points);
  const AffineFrame frame = reduce_to_affine_hull(points, dim);
  const auto r = static_cast<std::size_t>(frame.coords.rows());

  Vector reduced_center;
  std::vector<Eigen::Index> support;
  if (r == 0) {
    reduced_center = Vector::Zero(0);
    support = {0};
  } else if (r <= options.exact_dim_limit) {
    MoveToFrontSolver solver(frame.coords, options.tol);
    solver.solve();
    reduced_center = solver.center();
    support = prune_support(frame.coords, solver.support(), reduced_center);
  } else {
    core_set_iteration(frame.coords, options.tol, reduced_center, support);
  }

  Ball ball;
  ball.center = frame.origin + frame.basis * reduced_center;
  for (const auto& p : points) ball.radius = std::max(ball.radius, (p - ball.center).norm());
  ball.support.assign(support.begin(), support.end());
  std::sort(ball.support.begin(), ball.support.end());
  return ball;
}

}  // namespace embedgeo
