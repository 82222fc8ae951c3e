#include "embedgeo/theory.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "embedgeo/error.hpp"

namespace embedgeo::theory {

void validate(const TangentBallConfig& cfg) {
  if (!(cfg.center_norm > 0.0) || !std::isfinite(cfg.center_norm)) {
    throw Error(ErrorCode::BallContainsOrigin, "center norm must be positive and finite");
  }
  if (!(cfg.radius > 0.0) || !(cfg.radius < cfg.center_norm)) {
    throw Error(ErrorCode::BallContainsOrigin,
                "tangency needs 0 < radius < center_norm (radius=" + std::to_string(cfg.radius) +
                    ", center_norm=" + std::to_string(cfg.center_norm) + ")");
  }
  if (!(cfg.threshold > -1.0 && cfg.threshold < 1.0)) {
    throw Error(ErrorCode::InvalidThreshold, "threshold must lie in (-1, 1)");
  }
}

ArcLength tangent_arc_length(const TangentBallConfig& cfg) {
  validate(cfg);
  ArcLength out;
  out.theta = std::asin(cfg.radius / cfg.center_norm);
  out.arc_length = 2.0 * out.theta;
  return out;
}

double similar_fraction_estimate(const TangentBallConfig& cfg, std::size_t n_samples,
                                 std::uint64_t seed) {
  const double theta = tangent_arc_length(cfg).theta;
  if (n_samples == 0) throw Error(ErrorCode::InvalidSampleCount, "need at least one sample");
  const double wx = std::cos(theta);
  const double wy = std::sin(theta);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    const double dist = cfg.radius * std::sqrt(unit(rng));
    const double x = cfg.center_norm + dist * std::cos(angle);
    const double y = dist * std::sin(angle);
    const double cosine = (x * wx + y * wy) / std::hypot(x, y);
    if (cosine >= cfg.threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n_samples);
}

namespace {

// log Gamma(n/2 + 1) for integer n >= 1.
double log_gamma_half_integer(int n) {
  double acc = 0.0;
  if (n % 2 == 0) {
    for (int k = 2; k <= n / 2; ++k) acc += std::log(static_cast<double>(k));
    return acc;
  }
  // Gamma(n/2 + 1) = n!! * sqrt(pi) / 2^((n+1)/2)
  for (int k = 3; k <= n; k += 2) acc += std::log(static_cast<double>(k));
  return acc + 0.5 * std::log(std::numbers::pi) - 0.5 * (n + 1) * std::numbers::ln2;
}

}  // namespace

double ball_volume_log(int n, double radius) {
  if (n < 1) throw Error(ErrorCode::InvalidDimension, "dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::NonpositiveRadius, "radius must be positive and finite");
  }
  return 0.5 * n * std::log(std::numbers::pi) - log_gamma_half_integer(n) + n * std::log(radius);
}

double volume_ratio(int n, double r_new, double r_old) {
  if (n < 1) throw Error(ErrorCode::InvalidDimension, "dimension must be >= 1");
  if (!(r_new > 0.0) || !(r_old > 0.0) || !std::isfinite(r_new) || !std::isfinite(r_old)) {
    throw Error(ErrorCode::NonpositiveRadius, "radii must be positive and finite");
  }
  return std::exp(n * std::log(r_new / r_old));
}

}  // namespace embedgeo::theory
