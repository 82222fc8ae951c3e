#include "embedgeo/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace embedgeo::report {

namespace {

std::string opt_text(const std::optional<double>& v, const char* spec = "{:.4g}") {
  if (!v || !std::isfinite(*v)) return "nan";
  return fmt::format(fmt::runtime(spec), *v);
}

std::string num_text(double v, const char* spec = "{:.4g}") {
  if (!std::isfinite(v)) return "nan";
  return fmt::format(fmt::runtime(spec), v);
}

Json opt_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

Json vector_json(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

}  // namespace

Json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

std::string render_fit(const std::string& title, const OlsFit& fit) {
  const std::string rule(78, '=');
  const std::string thin(78, '-');
  std::string out;
  out += fmt::format("{:^78}\n", title);
  out += rule + "\n";
  auto row = [&](const std::string& l, const std::string& lv, const std::string& r, const std::string& rv) {
    out += fmt::format("{:<20}{:>18}   {:<20}{:>17}\n", l, lv, r, rv);
  };
  row("Dep. Variable:", fit.response_name, "R-squared:", opt_text(fit.r2, "{:.3f}"));
  row("No. Observations:", std::to_string(fit.n_obs), "Adj. R-squared:", opt_text(fit.adj_r2, "{:.3f}"));
  row("Df Residuals:", std::to_string(fit.df_resid), "F-statistic:", opt_text(fit.f_stat, "{:.4g}"));
  row("Df Model:", std::to_string(fit.df_model), "Prob (F-statistic):", opt_text(fit.f_pvalue, "{:.3g}"));
  row("", "", "Log-Likelihood:", num_text(fit.log_likelihood, "{:.2f}"));
  row("", "", "AIC:", num_text(fit.aic, "{:.4g}"));
  row("", "", "BIC:", num_text(fit.bic, "{:.4g}"));
  out += rule + "\n";
  out += fmt::format("{:<22}{:>10}{:>10}{:>9}{:>9}{:>9}{:>9}\n", "", "coef", "std err", "t", "P>|t|",
                     "[0.025", "0.975]");
  out += thin + "\n";
  for (std::size_t i = 0; i < fit.coef.size(); ++i) {
    out += fmt::format("{:<22}{:>10}{:>10}{:>9}{:>9}{:>9}{:>9}\n", fit.feature_names[i],
                       num_text(fit.coef[i], "{:.4f}"), num_text(fit.std_err[i], "{:.3f}"),
                       num_text(fit.t_stat[i], "{:.3f}"), num_text(fit.p_value[i], "{:.3f}"),
                       num_text(fit.conf_low[i], "{:.3f}"), num_text(fit.conf_high[i], "{:.3f}"));
  }
  out += rule + "\n";
  row("Omnibus:", opt_text(fit.omnibus, "{:.3f}"), "Durbin-Watson:", num_text(fit.durbin_watson, "{:.3f}"));
  row("Prob(Omnibus):", opt_text(fit.omnibus_p, "{:.3f}"), "Jarque-Bera (JB):",
      num_text(fit.jarque_bera, "{:.3f}"));
  row("Skew:", num_text(fit.skew, "{:.3f}"), "Prob(JB):", num_text(fit.jarque_bera_p, "{:.3g}"));
  row("Kurtosis:", num_text(fit.kurtosis, "{:.3f}"), "Cond. No.", num_text(fit.condition_number, "{:.3g}"));
  out += rule + "\n";
  if (fit.flat_response) out += "Note: FlatResponse, R-squared and inference are undefined.\n";
  return out;
}

std::string render_correlation(const NamedCorrelation& c) {
  if (!c.value) return fmt::format("{:<22} n={:<7} r=null ({})\n", c.name, c.n, c.note);
  return fmt::format("{:<22} n={:<7} r={:>8}  p={}\n", c.name, c.n, num_text(c.value->r, "{:.4f}"),
                     num_text(c.value->p_value, "{:.3g}"));
}

std::string render_bins(const BinnedSummary& bins) {
  std::string out = fmt::format("{:>4}{:>8}{:>11}{:>11}", "bin", "count", "key_min", "key_max");
  for (const auto& name : bins.columns) out += fmt::format("  {:>20}", name);
  out += "\n";
  for (std::size_t b = 0; b < bins.bins.size(); ++b) {
    const auto& s = bins.bins[b];
    out += fmt::format("{:>4}{:>8}{:>11}{:>11}", b + 1, s.count, num_text(s.key_min, "{:.3f}"),
                       num_text(s.key_max, "{:.3f}"));
    for (double m : s.means) out += fmt::format("  {:>20}", num_text(m, "{:.4f}"));
    out += "\n";
  }
  return out;
}

std::string render_study(const StudyReport& study) {
  std::string out = fmt::format("# {}\n", study.study);
  for (const auto& [key, value] : study.counts) out += fmt::format("{:<32} {}\n", key, value);
  if (!study.correlations.empty()) {
    out += "\nCorrelations with log2(freq)\n";
    for (const auto& c : study.correlations) out += render_correlation(c);
  }
  for (const auto& f : study.fits) {
    out += "\n";
    out += render_fit(f.name, f.fit);
  }
  if (study.bins) {
    out += "\n";
    out += render_bins(*study.bins);
  }
  if (!study.notes.empty()) {
    out += "\nNotes\n";
    for (const auto& n : study.notes) out += "  " + n + "\n";
  }
  return out;
}

std::string render_ball(const Ball& ball) {
  std::string out = fmt::format("radius  {}\n", num_text(ball.radius, "{:.10g}"));
  out += "center ";
  for (Eigen::Index i = 0; i < ball.center.size(); ++i) out += " " + num_text(ball.center[i], "{:.10g}");
  out += "\nsupport";
  for (auto s : ball.support) out += fmt::format(" {}", s);
  out += "\n";
  return out;
}

Json to_json(const OlsFit& fit) {
  Json coefs = Json::array();
  for (std::size_t i = 0; i < fit.coef.size(); ++i) {
    coefs.push_back({{"name", fit.feature_names[i]},
                     {"coef", number(fit.coef[i])},
                     {"std_err", number(fit.std_err[i])},
                     {"t", number(fit.t_stat[i])},
                     {"p_value", number(fit.p_value[i])},
                     {"conf_low", number(fit.conf_low[i])},
                     {"conf_high", number(fit.conf_high[i])}});
  }
  return Json{{"response", fit.response_name},
              {"features", fit.feature_names},
              {"n_obs", fit.n_obs},
              {"df_model", fit.df_model},
              {"df_resid", fit.df_resid},
              {"flat_response", fit.flat_response},
              {"r2", opt_number(fit.r2)},
              {"adj_r2", opt_number(fit.adj_r2)},
              {"f_stat", opt_number(fit.f_stat)},
              {"f_pvalue", opt_number(fit.f_pvalue)},
              {"ssr", number(fit.ssr)},
              {"log_likelihood", number(fit.log_likelihood)},
              {"aic", number(fit.aic)},
              {"bic", number(fit.bic)},
              {"coefficients", coefs},
              {"omnibus", opt_number(fit.omnibus)},
              {"omnibus_p", opt_number(fit.omnibus_p)},
              {"jarque_bera", number(fit.jarque_bera)},
              {"jarque_bera_p", number(fit.jarque_bera_p)},
              {"skew", number(fit.skew)},
              {"kurtosis", number(fit.kurtosis)},
              {"durbin_watson", number(fit.durbin_watson)},
              {"condition_number", number(fit.condition_number)}};
}

Json to_json(const Correlation& c) {
  return Json{{"r", number(c.r)}, {"p_value", number(c.p_value)}, {"n", c.n}};
}

Json to_json(const NamedCorrelation& c) {
  Json out{{"name", c.name}, {"n", c.n}};
  if (c.value) {
    out["r"] = number(c.value->r);
    out["p_value"] = number(c.value->p_value);
  } else {
    out["r"] = nullptr;
    out["p_value"] = nullptr;
    out["note"] = c.note;
  }
  return out;
}

Json to_json(const BinnedSummary& bins) {
  Json rows = Json::array();
  for (const auto& b : bins.bins) {
    Json row{{"count", b.count}, {"key_min", number(b.key_min)}, {"key_max", number(b.key_max)}};
    for (std::size_t i = 0; i < bins.columns.size() && i < b.means.size(); ++i) {
      row[bins.columns[i]] = number(b.means[i]);
    }
    rows.push_back(std::move(row));
  }
  return Json{{"n_bins", bins.n_bins},
              {"columns", bins.columns},
              {"bin_edges", vector_json(bins.bin_edges)},
              {"bins", rows}};
}

Json to_json(const StudyReport& study) {
  Json counts = Json::object();
  for (const auto& [k, v] : study.counts) counts[k] = v;
  Json fits = Json::array();
  for (const auto& f : study.fits) {
    Json j = to_json(f.fit);
    j["name"] = f.name;
    fits.push_back(std::move(j));
  }
  Json correlations = Json::array();
  for (const auto& c : study.correlations) correlations.push_back(to_json(c));
  Json out{{"study", study.study}, {"counts", counts}, {"correlations", correlations}, {"fits", fits}};
  out["bins"] = study.bins ? to_json(*study.bins) : Json(nullptr);
  out["notes"] = study.notes;
  return out;
}

Json to_json(const Ball& ball) {
  std::vector<double> center(ball.center.data(), ball.center.data() + ball.center.size());
  return Json{{"radius", number(ball.radius)}, {"center", vector_json(center)}, {"support", ball.support}};
}

Json to_json(const VariationReport& v) {
  return Json{{"radius_meb", number(v.radius_meb)},
              {"avg_pairwise_dist", number(v.avg_pairwise_dist)},
              {"max_pairwise_dist", number(v.max_pairwise_dist)},
              {"var_pairwise_dist", number(v.var_pairwise_dist)},
              {"avg_norm", number(v.avg_norm)},
              {"hull_area_2d", number(v.hull_area_2d)}};
}

}  // namespace embedgeo::report
