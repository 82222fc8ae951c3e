#pragma once

#include <cstddef>
#include <cstdint>

namespace embedgeo::theory {

/// A 2D ball of radius `radius` whose center lies at distance `center_norm`
/// from the origin, and a cosine threshold for "similar enough".
struct TangentBallConfig {
  double center_norm = 1.0;
  double radius = 0.5;
  double threshold = 0.8;
};

struct ArcLength {
  double theta = 0.0;       // angle between the center and a tangent direction
  double arc_length = 0.0;  // 2 * theta, on the unit circle
};

/// Throws BallContainsOrigin unless 0 < radius < center_norm, and
/// InvalidThreshold unless threshold lies in (-1, 1).
void validate(const TangentBallConfig& cfg);

ArcLength tangent_arc_length(const TangentBallConfig& cfg);

/// Fraction of points drawn uniformly from the disk whose cosine with the
/// tangent direction w reaches cfg.threshold.
///
/// Construction: the center sits on the positive x axis at
/// (center_norm, 0); w is the unit vector at angle +theta, i.e. it touches
/// the disk at the tangency point on the positive-angle side. Samples use a
/// local std::mt19937_64 seeded with `seed`: angle = 2*pi*U1,
/// distance = radius*sqrt(U2).
double similar_fraction_estimate(const TangentBallConfig& cfg, std::size_t n_samples,
                                 std::uint64_t seed);

/// Natural log of the volume of an n-ball of the given radius. The gamma
/// factor is evaluated exactly as a sum of logs (factorial for even n,
/// double factorial for odd n).
double ball_volume_log(int n, double radius);

/// (r_new / r_old)^n evaluated as exp(n * log(r_new / r_old)).
double volume_ratio(int n, double r_new, double r_old);

}  // namespace embedgeo::theory
