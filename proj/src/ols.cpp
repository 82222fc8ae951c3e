#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "embedgeo/error.hpp"
#include "embedgeo/stats.hpp"

namespace embedgeo {

Design make_design(std::string response_name, std::vector<double> response,
                   const std::vector<Column>& columns, bool intercept) {
  const std::size_t n = response.size();
  for (const auto& col : columns) {
    if (col.values.size() != n) {
      throw Error(ErrorCode::LengthMismatch, "column '" + col.name + "' has " +
                                                 std::to_string(col.values.size()) +
                                                 " values, response has " + std::to_string(n));
    }
  }
  Design design;
  design.response_name = std::move(response_name);
  const auto width = static_cast<Eigen::Index>(columns.size() + (intercept ? 1 : 0));
  design.features.resize(static_cast<Eigen::Index>(n), width);
  Eigen::Index c = 0;
  if (intercept) {
    design.feature_names.emplace_back("constant");
    design.features.col(c++).setOnes();
  }
  for (const auto& col : columns) {
    design.feature_names.push_back(col.name);
    design.features.col(c++) = Eigen::Map<const Eigen::VectorXd>(col.values.data(), static_cast<Eigen::Index>(n));
  }
  design.response = Eigen::Map<const Eigen::VectorXd>(response.data(), static_cast<Eigen::Index>(n));
  return design;
}

std::size_t OlsFit::index_of(const std::string& name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  return it == feature_names.end() ? npos : static_cast<std::size_t>(it - feature_names.begin());
}

namespace {

// D'Agostino skewness z-score.
double skew_z(double skew, double n) {
  const double y = skew * std::sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)));
  const double beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0) /
                       ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
  const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
  const double delta = 1.0 / std::sqrt(0.5 * std::log(w2));
  const double alpha = std::sqrt(2.0 / (w2 - 1.0));
  return delta * std::asinh(y / alpha);
}

// Anscombe-Glynn kurtosis z-score (kurtosis in the non-excess convention).
double kurtosis_z(double kurt, double n) {
  const double mean = 3.0 * (n - 1.0) / (n + 1.0);
  const double var = 24.0 * n * (n - 2.0) * (n - 3.0) / ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0));
  const double x = (kurt - mean) / std::sqrt(var);
  const double sqrt_beta1 = 6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0)) *
                            std::sqrt(6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0)));
  const double a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + std::sqrt(1.0 + 4.0 / (sqrt_beta1 * sqrt_beta1)));
  const double term1 = 1.0 - 2.0 / (9.0 * a);
  const double denom = 1.0 + x * std::sqrt(2.0 / (a - 4.0));
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double term2 = std::copysign(std::cbrt((1.0 - 2.0 / a) / std::abs(denom)), denom);
  return (term1 - term2) / std::sqrt(2.0 / (9.0 * a));
}

void residual_diagnostics(OlsFit& fit) {
  const Eigen::VectorXd& e = fit.residuals;
  const auto n = static_cast<double>(e.size());
  const double mean = e.mean();
  const Eigen::ArrayXd dev = e.array() - mean;
  const double m2 = dev.square().mean();
  const double m3 = dev.cube().mean();
  const double m4 = dev.square().square().mean();
  if (m2 > 0.0) {
    fit.skew = m3 / std::pow(m2, 1.5);
    fit.kurtosis = m4 / (m2 * m2);
  } else {
    fit.skew = std::numeric_limits<double>::quiet_NaN();
    fit.kurtosis = std::numeric_limits<double>::quiet_NaN();
  }
  fit.jarque_bera = n / 6.0 * (fit.skew * fit.skew + (fit.kurtosis - 3.0) * (fit.kurtosis - 3.0) / 4.0);
  // Chi-square with 2 degrees of freedom.
  fit.jarque_bera_p = std::exp(-fit.jarque_bera / 2.0);

  const double sse = e.squaredNorm();
  double diff = 0.0;
  for (Eigen::Index i = 1; i < e.size(); ++i) diff += (e(i) - e(i - 1)) * (e(i) - e(i - 1));
  fit.durbin_watson = sse > 0.0 ? diff / sse : std::numeric_limits<double>::quiet_NaN();

  if (e.size() >= 8 && m2 > 0.0) {
    const double zs = skew_z(fit.skew, n);
    const double zk = kurtosis_z(fit.kurtosis, n);
    const double k2 = zs * zs + zk * zk;
    if (std::isfinite(k2)) {
      fit.omnibus = k2;
      fit.omnibus_p = std::exp(-k2 / 2.0);
    }
  }
}

}  // namespace

OlsFit ols_fit(const Design& design) {
  const auto n = design.n_rows();
  const auto k = design.n_features();
  if (static_cast<std::size_t>(design.response.size()) != n) {
    throw Error(ErrorCode::LengthMismatch, "response length differs from the number of rows");
  }
  if (design.feature_names.size() != k) {
    throw Error(ErrorCode::LengthMismatch, "feature names do not match the design width");
  }
  if (k == 0 || n <= k) {
    throw Error(ErrorCode::TooFewRows, std::to_string(n) + " rows for " + std::to_string(k) +
                                           " features");
  }
  if (!design.features.allFinite() || !design.response.allFinite()) {
    throw Error(ErrorCode::NonFiniteInput, "design contains non-finite values");
  }

  const Eigen::MatrixXd& x = design.features;
  const Eigen::VectorXd& y = design.response;

  OlsFit fit;
  fit.response_name = design.response_name;
  fit.feature_names = design.feature_names;
  fit.n_obs = n;
  fit.df_resid = n - k;
  for (Eigen::Index c = 0; c < x.cols() && !fit.has_intercept; ++c) {
    const double v = x(0, c);
    fit.has_intercept = v != 0.0 && (x.col(c).array() == v).all();
  }
  fit.df_model = k - (fit.has_intercept ? 1 : 0);

  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(x).singularValues();
  fit.condition_number = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                  : std::numeric_limits<double>::infinity();
  if (!(fit.condition_number <= kMaxConditionNumber)) {
    throw Error(ErrorCode::RankDeficient,
                "condition number " + std::to_string(fit.condition_number) + " exceeds 1e10");
  }

  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::VectorXd qty = qr.householderQ().transpose() * y;
  const auto r = qr.matrixQR().topLeftCorner(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k))
                     .triangularView<Eigen::Upper>();
  const Eigen::VectorXd beta = r.solve(qty.head(static_cast<Eigen::Index>(k)));
  // (X^T X)^{-1} = R^{-1} R^{-T}
  const Eigen::MatrixXd r_inv = r.solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
  const Eigen::VectorXd xtx_inv_diag = r_inv.rowwise().squaredNorm();

  fit.fitted = x * beta;
  fit.residuals = y - fit.fitted;
  fit.ssr = fit.residuals.squaredNorm();

  const double y_mean = y.mean();
  const double sst = fit.has_intercept ? (y.array() - y_mean).square().sum() : y.squaredNorm();
  const double spread = y.maxCoeff() - y.minCoeff();
  fit.flat_response = spread <= kFlatResponseRelTol * std::max(1.0, std::abs(y_mean));

  const double dn = static_cast<double>(n);
  const double df_resid = static_cast<double>(fit.df_resid);
  const double sigma2 = fit.ssr / df_resid;
  const double t_crit = student_t_quantile_upper(0.025, df_resid);
  for (std::size_t i = 0; i < k; ++i) {
    const double b = beta(static_cast<Eigen::Index>(i));
    const double se = std::sqrt(sigma2 * xtx_inv_diag(static_cast<Eigen::Index>(i)));
    fit.coef.push_back(b);
    fit.std_err.push_back(se);
    if (fit.flat_response) {
      fit.t_stat.push_back(std::numeric_limits<double>::quiet_NaN());
      fit.p_value.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      const double t = b / se;
      fit.t_stat.push_back(t);
      fit.p_value.push_back(student_t_sf(t, df_resid));
    }
    fit.conf_low.push_back(b - t_crit * se);
    fit.conf_high.push_back(b + t_crit * se);
  }

  if (!fit.flat_response && sst > 0.0) {
    const double r2 = std::clamp(1.0 - fit.ssr / sst, 0.0, 1.0);
    fit.r2 = r2;
    const double offset = fit.has_intercept ? 1.0 : 0.0;
    fit.adj_r2 = 1.0 - (dn - offset) / df_resid * (1.0 - r2);
    if (fit.df_model > 0) {
      const double ess = sst - fit.ssr;
      const double f = (ess / static_cast<double>(fit.df_model)) / sigma2;
      if (std::isfinite(f)) {
        fit.f_stat = f;
        fit.f_pvalue = f_sf(f, static_cast<double>(fit.df_model), df_resid);
      }
    }
  }

  fit.log_likelihood = -dn / 2.0 * (std::log(2.0 * std::numbers::pi) + std::log(fit.ssr / dn) + 1.0);
  const double params = static_cast<double>(k);
  fit.aic = 2.0 * params - 2.0 * fit.log_likelihood;
  fit.bic = params * std::log(dn) - 2.0 * fit.log_likelihood;

  residual_diagnostics(fit);
  return fit;
}

}  // namespace embedgeo
