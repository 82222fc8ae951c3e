#include <cmath>
#include <limits>
#include <numbers>

#include "embedgeo/error.hpp"
#include "embedgeo/stats.hpp"

namespace embedgeo {

namespace {

// lgamma(x) - Stirling(x) for x >= 10.
double stirling_correction(double x) {
  const double x2 = 1.0 / (x * x);
  return (1.0 / 12.0 - x2 * (1.0 / 360.0 - x2 * (1.0 / 1260.0 - x2 * (1.0 / 1680.0 - x2 / 1188.0)))) / x;
}

// log B(a, b) keeping precision when one or both arguments are large.
double log_beta(double a, double b) {
  const double p = std::min(a, b);
  const double q = std::max(a, b);
  const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);
  if (p >= 10.0) {
    const double corr = stirling_correction(p) + stirling_correction(q) - stirling_correction(p + q);
    return -0.5 * std::log(q) + half_log_two_pi + corr + (p - 0.5) * std::log(p / (p + q)) +
           q * std::log1p(-p / (p + q));
  }
  if (q >= 10.0) {
    const double corr = stirling_correction(q) - stirling_correction(p + q);
    return std::lgamma(p) + corr + p - p * std::log(p + q) + (q - 0.5) * std::log1p(-p / (p + q));
  }
  return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 100000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_sf(double t, double df) {
  if (!(df >= 1.0)) throw Error(ErrorCode::InvalidDf, "degrees of freedom must be >= 1");
  if (std::isnan(t)) return t;
  const double at = std::abs(t);
  if (at == 0.0) return 1.0;
  if (std::isinf(at)) return 0.0;
  // P(|T| >= t) = I_{df/(df+t^2)}(df/2, 1/2); the ratio form keeps precision
  // for large t.
  const double x = df / (df + at * at);
  if (x < 0.5) return regularized_incomplete_beta(df / 2.0, 0.5, x);
  const double y = at * at / (df + at * at);
  return 1.0 - regularized_incomplete_beta(0.5, df / 2.0, y);
}

double student_t_quantile_upper(double upper_tail, double df) {
  if (!(df >= 1.0)) throw Error(ErrorCode::InvalidDf, "degrees of freedom must be >= 1");
  if (!(upper_tail > 0.0 && upper_tail < 0.5)) {
    if (upper_tail == 0.5) return 0.0;
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double target = 2.0 * upper_tail;
  double lo = 0.0;
  double hi = 1.0;
  while (student_t_sf(hi, df) > target) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_sf(mid, df) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double f_sf(double f, double d1, double d2) {
  if (std::isnan(f)) return f;
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

}  // namespace embedgeo
