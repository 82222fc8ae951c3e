#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "embedgeo/error.hpp"
#include "embedgeo/stats.hpp"

namespace embedgeo {

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "series lengths " + std::to_string(x.size()) + " and " +
                                               std::to_string(y.size()));
  }
  if (x.size() < 3) throw Error(ErrorCode::TooFewPoints, "correlation needs at least 3 points");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw Error(ErrorCode::ConstantSeries, "correlation with a constant series is undefined");
  }
  Correlation out;
  out.n = x.size();
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double one_minus = 1.0 - out.r * out.r;
  if (one_minus <= 0.0) {
    out.p_value = 0.0;
  } else {
    const double t = out.r * std::sqrt((n - 2.0) / one_minus);
    out.p_value = student_t_sf(t, n - 2.0);
  }
  return out;
}

std::vector<std::size_t> equal_count_sizes(std::size_t n, std::size_t n_bins) {
  if (n_bins == 0) throw Error(ErrorCode::TooFewValues, "n_bins must be at least 1");
  if (n < n_bins) {
    throw Error(ErrorCode::TooFewValues,
                std::to_string(n) + " values cannot fill " + std::to_string(n_bins) + " bins");
  }
  std::vector<std::size_t> sizes(n_bins, n / n_bins);
  for (std::size_t i = 0; i < n % n_bins; ++i) ++sizes[i];
  return sizes;
}

BinnedSummary equal_count_bins(std::span<const double> keys, const std::vector<Column>& payload,
                               std::size_t n_bins) {
  for (const auto& col : payload) {
    if (col.values.size() != keys.size()) {
      throw Error(ErrorCode::LengthMismatch, "payload column '" + col.name + "' length differs");
    }
  }
  const auto sizes = equal_count_sizes(keys.size(), n_bins);
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  BinnedSummary summary;
  summary.n_bins = n_bins;
  for (const auto& col : payload) summary.columns.push_back(col.name);
  std::size_t pos = 0;
  for (std::size_t b = 0; b < n_bins; ++b) {
    BinStats bin;
    bin.count = sizes[b];
    bin.key_min = keys[order[pos]];
    bin.key_max = keys[order[pos + sizes[b] - 1]];
    for (const auto& col : payload) {
      double total = 0.0;
      for (std::size_t i = pos; i < pos + sizes[b]; ++i) total += col.values[order[i]];
      bin.means.push_back(total / static_cast<double>(sizes[b]));
    }
    summary.bin_edges.push_back(bin.key_min);
    summary.bins.push_back(std::move(bin));
    pos += sizes[b];
  }
  summary.bin_edges.push_back(summary.bins.back().key_max);
  return summary;
}

}  // namespace embedgeo
