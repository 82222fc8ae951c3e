#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "embedgeo/analysis.hpp"
#include "embedgeo/geometry.hpp"
#include "embedgeo/stats.hpp"

namespace embedgeo::report {

using Json = nlohmann::ordered_json;

// Text layouts round for display; the JSON forms carry every double at full
// precision (non-finite values become null).

/// Regression table with the usual summary block: R^2, adjusted R^2, F,
/// log-likelihood, AIC/BIC, per-coefficient coef/std err/t/P>|t|/CI, then
/// Omnibus, Jarque-Bera, Durbin-Watson, skew, kurtosis and condition number.
std::string render_fit(const std::string& title, const OlsFit& fit);
std::string render_correlation(const NamedCorrelation& c);
std::string render_bins(const BinnedSummary& bins);
std::string render_study(const StudyReport& study);
std::string render_ball(const Ball& ball);

Json to_json(const OlsFit& fit);
Json to_json(const Correlation& c);
Json to_json(const NamedCorrelation& c);
Json to_json(const BinnedSummary& bins);
Json to_json(const StudyReport& study);
Json to_json(const Ball& ball);
Json to_json(const VariationReport& v);

/// A double as JSON: null when not finite.
Json number(double value);

}  // namespace embedgeo::report
