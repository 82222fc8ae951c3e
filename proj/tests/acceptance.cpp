// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every check draws from fixed seeds so reruns are reproducible.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "embedgeo/analysis.hpp"
#include "embedgeo/data.hpp"
#include "embedgeo/geometry.hpp"
#include "embedgeo/stats.hpp"
#include "embedgeo/synth.hpp"
#include "embedgeo/theory.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using embedgeo::Vector;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<Vector> random_points(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vector> pts(n, Vector(static_cast<Eigen::Index>(dim)));
  for (auto& p : pts) {
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = g(rng);
  }
  return pts;
}

Outcome meb_oracle() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> n_dist(1, 6);
  std::uniform_int_distribution<int> d_dist(1, 3);
  const auto start = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const auto pts = random_points(rng, static_cast<std::size_t>(n_dist(rng)), static_cast<std::size_t>(d_dist(rng)));
    const double got = embedgeo::min_enclosing_ball(pts).radius;
    const double want = oracle::brute_force_meb(pts).radius;
    worst = std::max(worst, want == 0.0 ? std::abs(got) : rel_err(got, want));
  }
  const double t = seconds_since(start);
  return {worst <= 1e-7 && t < 5.0, fmt::format("max rel err {:.3g}, {:.2f} s", worst, t)};
}

Outcome meb_high_dim() {
  std::mt19937_64 rng(202);
  double worst_rel = 0.0;
  double worst_excess = 0.0;
  double lib_time = 0.0;
  for (int i = 0; i < 200; ++i) {
    auto pts = random_points(rng, 10, 768);
    // Mixed scales and an offset keep the instances away from the easy regime.
    for (auto& p : pts) p = p * (0.5 + static_cast<double>(i % 7)) + Vector::Constant(768, 3.0);
    const auto start = Clock::now();
    const auto ball = embedgeo::min_enclosing_ball(pts, 1e-9);
    lib_time += seconds_since(start);
    for (const auto& p : pts) {
      worst_excess = std::max(worst_excess, (p - ball.center).norm() / ball.radius - 1.0);
    }
    worst_rel = std::max(worst_rel, rel_err(ball.radius, oracle::brute_force_meb(pts).radius));
  }
  const bool ok = worst_excess <= 1e-9 && worst_rel <= 1e-7 && lib_time < 10.0;
  return {ok, fmt::format("max rel err {:.3g}, max containment excess {:.3g}, {:.2f} s", worst_rel,
                          std::max(worst_excess, 0.0), lib_time)};
}

Outcome ols_oracle() {
  std::mt19937_64 rng(303);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> k_dist(1, 5);
  double coef_err = 0.0;
  double p_err = 0.0;
  double ortho = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = k_dist(rng);  // columns including the intercept
    std::uniform_int_distribution<int> n_dist(k + 2, 50);
    const int n = n_dist(rng);
    std::vector<embedgeo::Column> cols;
    for (int j = 1; j < k; ++j) {
      embedgeo::Column c{fmt::format("x{}", j), {}};
      for (int i = 0; i < n; ++i) c.values.push_back(g(rng) * (1.0 + j));
      cols.push_back(std::move(c));
    }
    std::vector<double> y;
    for (int i = 0; i < n; ++i) {
      double v = 0.3 + g(rng);
      for (int j = 1; j < k; ++j) v += 0.2 * j * cols[static_cast<std::size_t>(j - 1)].values[static_cast<std::size_t>(i)];
      y.push_back(v);
    }
    const auto design = embedgeo::make_design("y", y, cols);
    const auto fit = embedgeo::ols_fit(design);

    const auto beta = oracle::normal_equation_ols(design.features, design.response);
    using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const LMat xl = design.features.cast<long double>();
    const LMat inv = (xl.transpose() * xl).fullPivLu().inverse();
    long double ssr = 0.0L;
    for (int i = 0; i < n; ++i) {
      long double r = static_cast<long double>(y[static_cast<std::size_t>(i)]);
      for (int j = 0; j < k; ++j) r -= xl(i, j) * static_cast<long double>(beta[static_cast<std::size_t>(j)]);
      ssr += r * r;
    }
    const long double sigma2 = ssr / static_cast<long double>(n - k);
    for (int j = 0; j < k; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      coef_err = std::max(coef_err, std::abs(fit.coef[ju] - beta[ju]) / std::max(1.0, std::abs(beta[ju])));
      const double se = static_cast<double>(std::sqrt(sigma2 * inv(j, j)));
      const double p_ref = oracle::t_two_sided(beta[ju] / se, n - k);
      p_err = std::max(p_err, std::abs(fit.p_value[ju] - p_ref));
    }
    Eigen::VectorXd coef(k);
    for (int j = 0; j < k; ++j) coef[j] = fit.coef[static_cast<std::size_t>(j)];
    const Eigen::VectorXd resid = design.response - design.features * coef;
    ortho = std::max(ortho, (design.features.transpose() * resid).cwiseAbs().maxCoeff());
  }
  return {coef_err <= 1e-9 && p_err <= 1e-8 && ortho <= 1e-8,
          fmt::format("coef err {:.3g}, p err {:.3g}, max |X'e| {:.3g}", coef_err, p_err, ortho)};
}

Outcome theory_closed_forms() {
  namespace th = embedgeo::theory;
  const double ratio = th::volume_ratio(768, 1.01, 1.0);
  bool ok = ratio >= 2080.0 && ratio <= 2090.0;

  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int monotone_failures = 0;
  int pairs = 0;
  while (pairs < 1000) {
    const double c = 0.1 + 50.0 * u(rng);
    double r1 = c * u(rng);
    double r2 = c * u(rng);
    if (r1 == r2 || r1 <= 0.0 || r2 >= c) continue;
    if (r1 > r2) std::swap(r1, r2);
    ++pairs;
    if (!(th::tangent_arc_length({c, r1, 0.5}).arc_length < th::tangent_arc_length({c, r2, 0.5}).arc_length)) {
      ++monotone_failures;
    }
  }
  ok = ok && monotone_failures == 0;

  const double pi = std::numbers::pi;
  double vol_err = 0.0;
  for (double r : {0.01, 0.5, 1.0, 1.7, 3.0, 10.0}) {
    vol_err = std::max(vol_err, rel_err(std::exp(th::ball_volume_log(1, r)), 2.0 * r));
    vol_err = std::max(vol_err, rel_err(std::exp(th::ball_volume_log(2, r)), pi * r * r));
    vol_err = std::max(vol_err, rel_err(std::exp(th::ball_volume_log(3, r)), 4.0 / 3.0 * pi * r * r * r));
  }
  ok = ok && vol_err <= 1e-12;
  return {ok, fmt::format("volume_ratio {:.4f}, arc monotone failures {}/1000, V1-V3 rel err {:.3g}", ratio,
                          monotone_failures, vol_err)};
}

Outcome mc_fraction() {
  namespace th = embedgeo::theory;
  constexpr std::size_t kSamples = 1'000'000;
  double worst_z = 0.0;
  for (const auto& cfg : {th::TangentBallConfig{1.0, 0.3, 0.9}, th::TangentBallConfig{1.0, 0.15, 0.99},
                          th::TangentBallConfig{5.0, 2.0, 0.8}}) {
    const double p = th::similar_fraction_estimate(cfg, kSamples, 11);
    const double ref = oracle::grid_fraction(cfg.center_norm, cfg.radius, cfg.threshold, 4000);
    const double se = std::sqrt(std::max(ref * (1.0 - ref), 1e-12) / kSamples);
    worst_z = std::max(worst_z, std::abs(p - ref) / se);
  }
  double previous = 1.0;
  double previous_se = 0.0;
  int order_failures = 0;
  for (double r : {0.05, 0.1, 0.2, 0.3, 0.45, 0.6, 0.8}) {
    const double p = th::similar_fraction_estimate({1.0, r, 0.9}, kSamples, 12);
    const double se = std::sqrt(p * (1.0 - p) / kSamples);
    if (p > previous + 3.0 * std::hypot(se, previous_se)) ++order_failures;
    previous = p;
    previous_se = se;
  }
  return {worst_z <= 3.0 && order_failures == 0,
          fmt::format("max |z| vs grid {:.2f}, radius-order violations {}", worst_z, order_failures)};
}

Outcome planted_radius() {
  const auto start = Clock::now();
  embedgeo::SynthConfig cfg;
  cfg.n_words = 1000;
  cfg.contexts_per_word = 10;
  cfg.dim = 64;
  cfg.radius_slope = 0.4;
  cfg.noise_sigma = 0.1;
  cfg.seed = 505;
  const auto data = embedgeo::synth_generate(cfg);
  const auto cohorts = embedgeo::assemble_cohorts(data.cohort_dump, data.freq, data.senses);
  const auto study = embedgeo::radius_frequency_study(cohorts);
  const double t = seconds_since(start);
  const auto* fit = study.report.find_fit("radius~freq");
  const auto* corr = study.report.find_correlation("radius_meb");
  if (fit == nullptr || corr == nullptr || !corr->value) return {false, "radius fit or correlation missing"};
  const double slope = fit->fit.coef[1];
  const double r = corr->value->r;
  return {std::abs(slope - 0.4) <= 0.04 && r >= 0.9 && t < 30.0,
          fmt::format("slope {:.4f}, r {:.4f}, {:.2f} s", slope, r, t)};
}

Outcome planted_cosine() {
  const auto start = Clock::now();
  embedgeo::SynthConfig cfg;
  cfg.n_words = 1000;
  cfg.contexts_per_word = 2;
  cfg.dim = 32;
  cfg.seed = 606;
  cfg.pair_kind = embedgeo::PairKind::WordInContext;
  cfg.n_pairs = 2500;
  cfg.cosine_freq_slope = -0.012;
  cfg.cosine_noise_sigma = 0.05;
  const auto data = embedgeo::synth_generate(cfg);
  const auto report = embedgeo::wic_regressions(data.pairs, data.pair_dump, data.freq, data.senses);
  const auto tuned = embedgeo::threshold_tune(data.pairs, data.pair_dump);
  const auto bins = embedgeo::binned_agreement(data.pairs, data.pair_dump, data.freq, tuned.threshold, 10);
  const double t = seconds_since(start);

  bool ok = t < 30.0;
  std::string detail;
  for (const char* name : {"different/model1", "same/model1"}) {
    const auto* f = report.find_fit(name);
    if (f == nullptr) return {false, fmt::format("{} missing", name)};
    const double slope = f->fit.coef[1];
    const double p = f->fit.p_value[1];
    ok = ok && std::abs(slope + 0.012) <= 0.2 * 0.012 && p < 1e-3;
    detail += fmt::format("{} slope {:.5f} p {:.2g}; ", name, slope, p);
  }
  // Human fraction counts as flat when every decile stays within 0.05 of the
  // overall rate.
  bool decreasing = true;
  double human_dev = 0.0;
  double human_mean = 0.0;
  for (const auto& b : bins.summary.bins) human_mean += b.means[1] / static_cast<double>(bins.summary.bins.size());
  for (std::size_t i = 0; i < bins.summary.bins.size(); ++i) {
    if (i > 0 && !(bins.summary.bins[i].means[0] < bins.summary.bins[i - 1].means[0])) decreasing = false;
    human_dev = std::max(human_dev, std::abs(bins.summary.bins[i].means[1] - human_mean));
  }
  ok = ok && decreasing && human_dev <= 0.05 && bins.summary.bins.size() == 10;
  const auto& first = bins.summary.bins.front();
  const auto& last = bins.summary.bins.back();
  detail += fmt::format("model fraction {:.3f} -> {:.3f} ({}), human max dev {:.3f}, {:.2f} s", first.means[0],
                        last.means[0], decreasing ? "strictly decreasing" : "not monotone", human_dev, t);
  return {ok, detail};
}

Outcome residual() {
  embedgeo::SynthConfig cfg;
  cfg.n_words = 1000;
  cfg.contexts_per_word = 2;
  cfg.dim = 32;
  cfg.seed = 707;
  cfg.pair_kind = embedgeo::PairKind::RatedSimilarity;
  cfg.n_pairs = 2000;
  cfg.cosine_freq_slope = -0.01;
  const auto data = embedgeo::synth_generate(cfg);
  const auto study = embedgeo::residual_study(data.pairs, data.pair_dump, data.freq, 1000, 7);
  return {study.correlation.r <= -0.1,
          fmt::format("r {:.4f} over {} held-out pairs", study.correlation.r, study.n_eval)};
}

Outcome null_calibration() {
  std::size_t fits = 0;
  std::size_t flagged = 0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    embedgeo::SynthConfig cfg;
    cfg.n_words = 200;
    cfg.contexts_per_word = 2;
    cfg.dim = 8;
    cfg.seed = 10'000 + trial;
    cfg.n_pairs = 300;
    cfg.cosine_freq_slope = 0.0;
    cfg.cosine_rating_slope = 0.0;
    cfg.wordform_effect = 0.0;
    cfg.sense_effect = 0.0;
    const bool wic = trial % 2 == 0;
    cfg.pair_kind = wic ? embedgeo::PairKind::WordInContext : embedgeo::PairKind::RatedSimilarity;
    const auto data = embedgeo::synth_generate(cfg);
    const auto report = wic ? embedgeo::wic_regressions(data.pairs, data.pair_dump, data.freq, data.senses)
                            : embedgeo::scws_regressions(data.pairs, data.pair_dump, data.freq, data.senses);
    for (const auto& nf : report.fits) {
      ++fits;
      const auto& f = nf.fit;
      for (std::size_t j = f.has_intercept ? 1 : 0; j < f.p_value.size(); ++j) {
        if (f.p_value[j] < 1e-3) {
          ++flagged;
          break;
        }
      }
    }
  }
  const double rate = static_cast<double>(flagged) / static_cast<double>(fits);
  return {rate <= 0.005, fmt::format("{} of {} fits ({:.3f}%) have a coefficient with p < 0.001", flagged, fits,
                                     100.0 * rate)};
}

// Tokens built from word bytes, joined by separators the tokenizer must skip.
struct CorpusFixture {
  std::string text;
  std::map<std::string, std::uint64_t> counts;
};

CorpusFixture make_corpus(std::size_t target_bytes) {
  std::mt19937_64 rng(808);
  const std::string alnum = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::vector<std::string> vocab;
  std::uniform_int_distribution<std::size_t> len(1, 9);
  std::uniform_int_distribution<std::size_t> pick(0, alnum.size() - 1);
  for (int i = 0; i < 3000; ++i) {
    std::string w;
    for (std::size_t j = len(rng); j > 0; --j) w += alnum[pick(rng)];
    vocab.push_back(w);
  }
  for (const char* w : {"naïve", "café", "Café", "日本語", "über", "Straße", "the", "The", "THE"}) vocab.emplace_back(w);
  const std::vector<std::string> separators{" ", "  ", "\n", "\t", ", ", ". ", "'", "--", "\r\n", "(", ") ", "\"", "!?"};
  // Zipf-like choice so a few tokens dominate.
  std::vector<double> weights;
  for (std::size_t i = 0; i < vocab.size(); ++i) weights.push_back(1.0 / static_cast<double>(i + 1));
  std::discrete_distribution<std::size_t> word_dist(weights.begin(), weights.end());
  std::uniform_int_distribution<std::size_t> sep_dist(0, separators.size() - 1);
  CorpusFixture out;
  while (out.text.size() < target_bytes) {
    const auto& w = vocab[word_dist(rng)];
    out.text += w;
    ++out.counts[w];
    out.text += separators[sep_dist(rng)];
  }
  return out;
}

std::string write_text(const embedgeo::EmbeddingDump& d) {
  std::ostringstream s;
  embedgeo::write_embedding_dump(d, s);
  return s.str();
}

Outcome round_trips() {
  embedgeo::SynthConfig cfg;
  cfg.n_words = 200;
  cfg.contexts_per_word = 3;
  cfg.dim = 16;
  cfg.seed = 909;
  cfg.pair_kind = embedgeo::PairKind::RatedSimilarity;
  cfg.n_pairs = 300;
  const auto data = embedgeo::synth_generate(cfg);
  std::vector<std::string> failures;

  // Vectors are written with 9 significant digits.
  const std::string dump_text = write_text(data.cohort_dump);
  std::istringstream dump_in(dump_text);
  const auto dump_back = embedgeo::parse_embedding_dump(dump_in);
  double worst = 0.0;
  bool same_keys = dump_back.size() == data.cohort_dump.size() && dump_back.dim() == data.cohort_dump.dim();
  for (std::size_t i = 0; same_keys && i < dump_back.size(); ++i) {
    const auto& a = data.cohort_dump.records()[i];
    const auto& b = dump_back.records()[i];
    same_keys = a.word == b.word && a.context_id == b.context_id;
    for (Eigen::Index j = 0; j < a.vector.size(); ++j) worst = std::max(worst, rel_err(b.vector[j], a.vector[j]));
  }
  if (!same_keys || worst > 5e-9 || write_text(dump_back) != dump_text) failures.push_back("dump");

  std::ostringstream freq_out;
  embedgeo::write_count_table(data.freq, freq_out);
  std::istringstream freq_in(freq_out.str());
  if (embedgeo::parse_frequency_table(freq_in).entries() != data.freq.entries()) failures.push_back("frequency");

  std::ostringstream pairs_out;
  embedgeo::write_pairs(data.pairs, pairs_out);
  std::istringstream pairs_in(pairs_out.str());
  const auto pairs_back = embedgeo::parse_pairs(pairs_in);
  bool pairs_ok = pairs_back.size() == data.pairs.size();
  for (std::size_t i = 0; pairs_ok && i < pairs_back.size(); ++i) {
    const auto& a = data.pairs[i];
    const auto& b = pairs_back[i];
    pairs_ok = a.id == b.id && a.lemma == b.lemma && a.pos == b.pos && a.word1 == b.word1 && a.word2 == b.word2 &&
               a.context_id1 == b.context_id1 && a.context_id2 == b.context_id2 && a.human_label == b.human_label &&
               a.human_rating == b.human_rating;
  }
  if (!pairs_ok) failures.push_back("pairs");

  const auto corpus = make_corpus(1 << 20);
  const auto dir = fs::temp_directory_path() / "embedgeo_acceptance";
  fs::create_directories(dir);
  const auto path = dir / "corpus.txt";
  std::ofstream(path, std::ios::binary) << corpus.text;
  const auto counted = embedgeo::count_corpus_frequencies({path}, true);
  bool corpus_ok = counted.size() == corpus.counts.size();
  for (const auto& [w, c] : corpus.counts) corpus_ok = corpus_ok && counted.find(w) == c;
  std::map<std::string, std::uint64_t> folded;
  for (const auto& [w, c] : corpus.counts) {
    std::string f = w;
    for (auto& ch : f) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    folded[f] += c;
  }
  const auto counted_folded = embedgeo::count_corpus_frequencies({path}, false);
  corpus_ok = corpus_ok && counted_folded.size() == folded.size();
  for (const auto& [w, c] : folded) corpus_ok = corpus_ok && counted_folded.find(w) == c;
  fs::remove_all(dir);
  if (!corpus_ok) failures.push_back("corpus counter");

  std::string detail = fmt::format("dump max rel err {:.2g}, {} corpus bytes, {} distinct tokens", worst,
                                   corpus.text.size(), corpus.counts.size());
  for (const auto& f : failures) detail += "; mismatch: " + f;
  return {failures.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"meb-oracle", meb_oracle},
      {"meb-high-dim", meb_high_dim},
      {"ols-oracle", ols_oracle},
      {"theory-closed-forms", theory_closed_forms},
      {"monte-carlo-fraction", mc_fraction},
      {"planted-radius-frequency", planted_radius},
      {"planted-cosine-frequency", planted_cosine},
      {"residual-study", residual},
      {"null-calibration", null_calibration},
      {"format-round-trips", round_trips},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
