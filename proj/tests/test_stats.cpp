#include <cmath>
#include <random>
#include <vector>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "doctest.h"
#include "embedgeo/error.hpp"
#include "embedgeo/stats.hpp"
#include "oracles.hpp"

using embedgeo::Column;
using embedgeo::Error;
using embedgeo::ErrorCode;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an embedgeo::Error");
  return ErrorCode::EmptyInput;
}

// Fixed design whose summary was frozen from statsmodels OLS.
const std::vector<double> kX1{2.041,  -2.556, 0.418,  -0.568, -0.453, -0.216, -2.02,  -0.232, -0.865, 3.323,
                              0.226,  -0.353, -0.281, -0.668, -1.055, -0.391, 0.482,  -0.239, 0.958,  -0.2};
const std::vector<double> kX2{0.007, 4.867, 1.492, 1.57,  4.459, 2.926, 2.357, 3.866, 0.152, 3.535,
                              1.871, 0.454, 3.303, 4.657, 1.036, 3.15,  1.491, 3.709, 3.611, 1.094};
const std::vector<double> kY{2.296, -1.867, 1.737,  0.352, -0.738, 0.462, -0.849, 0.857, 1.136, 3.195,
                             1.675, 0.979,  -0.179, -0.139, 0.636, 0.135, 1.047,  0.311, -0.064, 1.357};

// Two-sided t tail by integrating the density.
double t_tail_quadrature(double t, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
  auto density = [&](double x) { return c * std::pow(1.0 + x * x / df, -(df + 1) / 2); };
  const double inner = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, 0.0, std::abs(t), 15, 1e-14);
  return 1.0 - 2.0 * inner;
}

}  // namespace

TEST_CASE("ols: statsmodels summary of a fixed design") {
  const auto fit = embedgeo::ols_fit(embedgeo::make_design("y", kY, {{"x1", kX1}, {"x2", kX2}}));
  REQUIRE(fit.coef.size() == 3);
  CHECK(fit.feature_names == std::vector<std::string>{"constant", "x1", "x2"});
  const double coef[3] = {1.5080098783335214, 0.6835140862416466, -0.3227481757053705};
  const double se[3] = {0.2102403028023095, 0.08883083241477337, 0.0733738350608989};
  const double tv[3] = {7.172791601958043, 7.694559058617715, -4.398682111102624};
  const double pv[3] = {1.5604363657712271e-06, 6.175678243485328e-07, 0.0003922922953904814};
  const double lo[3] = {1.064441612392844, 0.49609741222106907, -0.47755343592221744};
  const double hi[3] = {1.9515781442741988, 0.870930760262224, -0.1679429154885236};
  for (int i = 0; i < 3; ++i) {
    CHECK(fit.coef[i] == doctest::Approx(coef[i]).epsilon(1e-10));
    CHECK(fit.std_err[i] == doctest::Approx(se[i]).epsilon(1e-10));
    CHECK(fit.t_stat[i] == doctest::Approx(tv[i]).epsilon(1e-10));
    CHECK(fit.p_value[i] == doctest::Approx(pv[i]).epsilon(1e-8));
    CHECK(fit.conf_low[i] == doctest::Approx(lo[i]).epsilon(1e-9));
    CHECK(fit.conf_high[i] == doctest::Approx(hi[i]).epsilon(1e-9));
  }
  CHECK(fit.n_obs == 20);
  CHECK(fit.df_model == 2);
  CHECK(fit.df_resid == 17);
  CHECK(*fit.r2 == doctest::Approx(0.8436138165424176).epsilon(1e-12));
  CHECK(*fit.adj_r2 == doctest::Approx(0.8252154420179961).epsilon(1e-12));
  CHECK(*fit.f_stat == doctest::Approx(45.85262765591762).epsilon(1e-10));
  CHECK(*fit.f_pvalue == doctest::Approx(1.4147712911587287e-07).epsilon(1e-8));
  CHECK(fit.log_likelihood == doctest::Approx(-12.165066576997273).epsilon(1e-12));
  CHECK(fit.aic == doctest::Approx(30.330133153994545).epsilon(1e-12));
  CHECK(fit.bic == doctest::Approx(33.317329974656516).epsilon(1e-12));
  CHECK(fit.ssr == doctest::Approx(3.952553654535417).epsilon(1e-12));
  CHECK(*fit.omnibus == doctest::Approx(0.7810198447794972).epsilon(1e-9));
  CHECK(*fit.omnibus_p == doctest::Approx(0.6767117160482148).epsilon(1e-9));
  CHECK(fit.jarque_bera == doctest::Approx(0.5344847663209604).epsilon(1e-10));
  CHECK(fit.jarque_bera_p == doctest::Approx(0.7654875076960924).epsilon(1e-10));
  CHECK(fit.skew == doctest::Approx(-0.37918244132727497).epsilon(1e-10));
  CHECK(fit.kurtosis == doctest::Approx(2.7425812276823947).epsilon(1e-10));
  CHECK(fit.durbin_watson == doctest::Approx(1.952778119423072).epsilon(1e-12));
  CHECK(fit.condition_number == doctest::Approx(6.178237828586802).epsilon(1e-9));
  CHECK(fit.index_of("x2") == 2);
  CHECK(fit.index_of("nope") == embedgeo::OlsFit::npos);
}

TEST_CASE("ols: random designs against normal equations") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 1 + trial % 5;
    const int n = k + 3 + trial % 40;
    std::vector<Column> cols;
    for (int j = 0; j < k; ++j) {
      Column c{"x" + std::to_string(j), {}};
      for (int i = 0; i < n; ++i) c.values.push_back(normal(rng) * (1.0 + j));
      cols.push_back(std::move(c));
    }
    std::vector<double> y;
    for (int i = 0; i < n; ++i) y.push_back(0.3 + cols[0].values[static_cast<std::size_t>(i)] + normal(rng));
    const auto design = embedgeo::make_design("y", y, cols);
    const auto fit = embedgeo::ols_fit(design);
    const auto ref = oracle::normal_equation_ols(design.features, design.response);
    for (std::size_t j = 0; j < ref.size(); ++j) CHECK(std::abs(fit.coef[j] - ref[j]) <= 1e-9 * std::max(1.0, std::abs(ref[j])));
    for (std::size_t j = 0; j < ref.size(); ++j) {
      CHECK(std::abs(fit.p_value[j] - oracle::t_two_sided(fit.t_stat[j], static_cast<double>(fit.df_resid))) <= 1e-8);
    }
    const Eigen::VectorXd xte = design.features.transpose() * fit.residuals;
    CHECK(xte.cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((fit.fitted + fit.residuals - design.response).norm() <= 1e-10);
  }
}

TEST_CASE("ols: without intercept") {
  const auto fit = embedgeo::ols_fit(embedgeo::make_design("y", {2.0, 4.1, 5.9, 8.2}, {{"x", {1, 2, 3, 4}}}, false));
  CHECK(fit.coef.size() == 1);
  CHECK_FALSE(fit.has_intercept);
  CHECK(fit.coef[0] == doctest::Approx((2.0 + 8.2 + 17.7 + 32.8) / 30.0));
}

TEST_CASE("ols: flat response is flagged, not significant") {
  const auto fit = embedgeo::ols_fit(embedgeo::make_design("y", {0.7, 0.7, 0.7, 0.7, 0.7}, {{"x", {1, 2, 3, 4, 5}}}));
  CHECK(fit.flat_response);
  CHECK_FALSE(fit.r2.has_value());
  CHECK_FALSE(fit.f_stat.has_value());
  CHECK(fit.coef[0] == doctest::Approx(0.7));
  CHECK(std::abs(fit.coef[1]) < 1e-12);
  CHECK(std::isnan(fit.p_value[1]));
}

TEST_CASE("ols: errors") {
  CHECK(code_of([] { embedgeo::ols_fit(embedgeo::make_design("y", {1, 2}, {{"x", {1, 3}}})); }) == ErrorCode::TooFewRows);
  CHECK(code_of([] {
          embedgeo::ols_fit(embedgeo::make_design("y", {1, 2, 4, 3}, {{"a", {1, 2, 3, 4}}, {"b", {2, 4, 6, 8}}}));
        }) == ErrorCode::RankDeficient);
  CHECK(code_of([] { embedgeo::make_design("y", {1, 2, 3}, {{"x", {1, 2}}}); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("student t tail against quadrature and Boost") {
  CHECK(embedgeo::student_t_sf(2.0, 10.0) == doctest::Approx(0.07338803477074039).epsilon(1e-12));
  for (double df : {1.0, 2.0, 3.5, 7.0, 30.0, 250.0, 5000.0}) {
    for (double t : {0.0, 0.1, 0.5, 1.0, 1.96, 3.0, 6.0, 15.0}) {
      const double p = embedgeo::student_t_sf(t, df);
      CHECK(p == doctest::Approx(oracle::t_two_sided(t, df)).epsilon(1e-10));
      CHECK(std::abs(p - t_tail_quadrature(t, df)) <= 1e-10);
      CHECK(embedgeo::student_t_sf(-t, df) == doctest::Approx(p));
    }
  }
  CHECK(code_of([] { embedgeo::student_t_sf(1.0, 0.5); }) == ErrorCode::InvalidDf);
}

TEST_CASE("distribution helpers") {
  CHECK(embedgeo::student_t_quantile_upper(0.025, 10.0) == doctest::Approx(2.2281388519649385).epsilon(1e-10));
  CHECK(embedgeo::f_sf(3.2, 2.0, 17.0) == doctest::Approx(0.06614256666642138).epsilon(1e-10));
  CHECK(embedgeo::normal_sf(1.7) == doctest::Approx(0.04456546275854304).epsilon(1e-12));
  for (double a : {0.5, 1.0, 2.5, 40.0}) {
    for (double b : {0.5, 3.0, 100.0}) {
      for (double x : {0.0, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0}) {
        CHECK(std::abs(embedgeo::regularized_incomplete_beta(a, b, x) - boost::math::ibeta(a, b, x)) <= 1e-12);
      }
    }
  }
  boost::math::fisher_f f(3.0, 40.0);
  CHECK(embedgeo::f_sf(2.5, 3.0, 40.0) == doctest::Approx(boost::math::cdf(boost::math::complement(f, 2.5))).epsilon(1e-10));
}

TEST_CASE("pearson") {
  const auto c = embedgeo::pearson(std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8},
                                   std::vector<double>{2.1, 3.9, 6.2, 7.8, 10.1, 12.2, 13.8, 16.5});
  CHECK(c.r == doctest::Approx(0.9989776683093574).epsilon(1e-13));
  CHECK(c.p_value == doctest::Approx(2.6692080418396403e-09).epsilon(1e-8));
  CHECK(c.n == 8);
  const auto d = embedgeo::pearson(std::vector<double>{1, 2, 3, 4, 5}, std::vector<double>{5, 3, 4, 1, 2});
  CHECK(d.r == doctest::Approx(-0.8).epsilon(1e-13));
  CHECK(d.p_value == doctest::Approx(0.10408803866182799).epsilon(1e-10));
  const auto perfect = embedgeo::pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6});
  CHECK(perfect.r == doctest::Approx(1.0));
  CHECK(perfect.p_value == 0.0);

  CHECK(code_of([] { embedgeo::pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 1, 1}); }) ==
        ErrorCode::ConstantSeries);
  CHECK(code_of([] { embedgeo::pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}); }) == ErrorCode::TooFewPoints);
  CHECK(code_of([] { embedgeo::pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}); }) ==
        ErrorCode::LengthMismatch);
}

TEST_CASE("pearson: symmetric and affine invariant") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 25; ++i) {
      x.push_back(normal(rng));
      y.push_back(0.5 * x.back() + normal(rng));
    }
    const auto a = embedgeo::pearson(x, y);
    CHECK(a.r == doctest::Approx(oracle::pearson_r(x, y)).epsilon(1e-12));
    CHECK(embedgeo::pearson(y, x).r == doctest::Approx(a.r).epsilon(1e-14));
    std::vector<double> scaled;
    for (double v : y) scaled.push_back(-3.0 * v + 11.0);
    CHECK(embedgeo::pearson(x, scaled).r == doctest::Approx(-a.r).epsilon(1e-12));
  }
}

TEST_CASE("equal-count bins") {
  CHECK(embedgeo::equal_count_sizes(23, 5) == std::vector<std::size_t>{5, 5, 5, 4, 4});
  CHECK(embedgeo::equal_count_sizes(10, 10) == std::vector<std::size_t>(10, 1));

  const std::vector<double> keys{5, 1, 4, 2, 3, 3, 6};
  const Column payload{"v", {50, 10, 40, 20, 30, 31, 60}};
  const auto bins = embedgeo::equal_count_bins(keys, {payload}, 3);
  REQUIRE(bins.bins.size() == 3);
  CHECK(bins.bins[0].count == 3);
  CHECK(bins.bins[1].count == 2);
  CHECK(bins.bins[2].count == 2);
  // Stable: key 3 at index 4 precedes key 3 at index 5.
  CHECK(bins.bins[0].means[0] == doctest::Approx(20.0));
  CHECK(bins.bins[1].means[0] == doctest::Approx(35.5));
  CHECK(bins.bin_edges == std::vector<double>{1, 3, 5, 6});
  CHECK(bins.columns == std::vector<std::string>{"v"});

  CHECK(code_of([&] { embedgeo::equal_count_bins(keys, {payload}, 0); }) == ErrorCode::TooFewValues);
  CHECK(code_of([&] { embedgeo::equal_count_bins(keys, {payload}, 8); }) == ErrorCode::TooFewValues);
}

TEST_CASE("equal-count bins: counts always sum to n") {
  for (std::size_t n = 1; n < 60; ++n) {
    for (std::size_t b = 1; b <= n; b += 3) {
      const auto sizes = embedgeo::equal_count_sizes(n, b);
      std::size_t total = 0;
      for (auto s : sizes) total += s;
      CHECK(total == n);
      CHECK(sizes.front() - sizes.back() <= 1);
    }
  }
}
