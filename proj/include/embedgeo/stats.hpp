#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace embedgeo {

inline constexpr double kMaxConditionNumber = 1e10;
// Responses whose spread is below this fraction of max(1, |mean|) are
// treated as constant (R^2 undefined).
inline constexpr double kFlatResponseRelTol = 1e-12;

/// Regression design: one row per observation. When an intercept is
/// requested the first column is all ones and is named "constant".
struct Design {
  std::string response_name;
  std::vector<std::string> feature_names;
  Eigen::MatrixXd features;  // n_rows x n_features
  Eigen::VectorXd response;

  std::size_t n_rows() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t n_features() const { return static_cast<std::size_t>(features.cols()); }
};

struct Column {
  std::string name;
  std::vector<double> values;
};

Design make_design(std::string response_name, std::vector<double> response,
                   const std::vector<Column>& columns, bool intercept = true);

/// Full OLS summary with the fields of a statsmodels-style regression table.
/// Fields that are undefined for a given fit (e.g. R^2 of a constant
/// response) are empty optionals; per-coefficient inference is NaN when the
/// response is flat.
struct OlsFit {
  std::string response_name;
  std::vector<std::string> feature_names;
  std::vector<double> coef;
  std::vector<double> std_err;
  std::vector<double> t_stat;
  std::vector<double> p_value;
  std::vector<double> conf_low;   // 95% interval
  std::vector<double> conf_high;

  std::size_t n_obs = 0;
  std::size_t df_model = 0;  // non-constant regressors
  std::size_t df_resid = 0;
  bool has_intercept = false;
  bool flat_response = false;

  std::optional<double> r2;
  std::optional<double> adj_r2;
  std::optional<double> f_stat;
  std::optional<double> f_pvalue;
  double ssr = 0.0;
  double log_likelihood = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double condition_number = 0.0;

  // Residual diagnostics.
  std::optional<double> omnibus;
  std::optional<double> omnibus_p;
  double jarque_bera = 0.0;
  double jarque_bera_p = 0.0;
  double skew = 0.0;
  double kurtosis = 0.0;
  double durbin_watson = 0.0;

  Eigen::VectorXd fitted;
  Eigen::VectorXd residuals;

  /// Index of a named feature, or npos.
  std::size_t index_of(const std::string& name) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Least squares via Householder QR of the design matrix. Rejects designs
/// with no more rows than features (TooFewRows) or a condition number above
/// kMaxConditionNumber (RankDeficient).
OlsFit ols_fit(const Design& design);

/// Two-sided Student-t tail probability P(|T| >= |t|).
double student_t_sf(double t, double df);

/// Upper quantile: the t with P(T > t) = upper_tail.
double student_t_quantile_upper(double upper_tail, double df);

/// Regularized incomplete beta I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

/// Upper tail of the F(d1, d2) distribution.
double f_sf(double f, double d1, double d2);

/// Upper tail of the standard normal.
double normal_sf(double z);

struct Correlation {
  double r = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

Correlation pearson(std::span<const double> x, std::span<const double> y);

struct BinStats {
  std::size_t count = 0;
  double key_min = 0.0;
  double key_max = 0.0;
  // Mean of each payload column over the bin's members.
  std::vector<double> means;
};

struct BinnedSummary {
  std::size_t n_bins = 0;
  std::vector<std::string> columns;
  // n_bins + 1 edges: the smallest key of each bin followed by the largest
  // key of the last bin.
  std::vector<double> bin_edges;
  std::vector<BinStats> bins;
};

/// Sorts by key (stable, so ties keep input order) and cuts into n_bins
/// contiguous groups. With n = q*n_bins + rem the first `rem` bins hold q+1
/// items and the rest hold q.
BinnedSummary equal_count_bins(std::span<const double> keys,
                               const std::vector<Column>& payload, std::size_t n_bins);

/// Sizes produced by equal_count_bins for n items.
std::vector<std::size_t> equal_count_sizes(std::size_t n, std::size_t n_bins);

}  // namespace embedgeo
