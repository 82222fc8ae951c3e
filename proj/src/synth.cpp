#include "embedgeo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "embedgeo/error.hpp"

namespace embedgeo {

namespace {

using Rng = std::mt19937_64;

// Stream separation: pairs draw from their own generator so changing the
// pair settings never perturbs the cohorts.
constexpr std::uint64_t kPairStream = 0x9E3779B97F4A7C15ULL;

constexpr double kCosineClip = 0.99;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidConfig, what);
}

std::string padded(char prefix, std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

std::size_t digits_for(std::size_t count, std::size_t min_width) {
  std::size_t width = 1;
  for (std::size_t v = count > 0 ? count - 1 : 0; v >= 10; v /= 10) ++width;
  return std::max(width, min_width);
}

Vector unit_direction(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(dim));
  double norm = 0.0;
  while (norm < 1e-12) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
    norm = v.norm();
  }
  return v / norm;
}

struct WordInfo {
  std::string name;
  std::uint64_t frequency = 0;
  std::uint64_t senses = 1;
  double log2f = 0.0;
  PartOfSpeech pos = PartOfSpeech::Noun;
};

// Two vectors with cosine exactly c (up to rounding) and random norms.
std::pair<Vector, Vector> vectors_with_cosine(Rng& rng, std::size_t dim, double c) {
  const Vector a = unit_direction(rng, dim);
  Vector b = unit_direction(rng, dim);
  b -= b.dot(a) * a;
  while (b.norm() < 1e-6) {
    b = unit_direction(rng, dim);
    b -= b.dot(a) * a;
  }
  b.normalize();
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  const Vector u = a * scale(rng);
  const Vector v = (c * a + std::sqrt(1.0 - c * c) * b) * scale(rng);
  return {u, v};
}

}  // namespace

double van_der_corput(std::uint64_t k) {
  double result = 0.0;
  double place = 0.5;
  while (k != 0) {
    if (k & 1U) result += place;
    k >>= 1U;
    place *= 0.5;
  }
  return result;
}

void validate(const SynthConfig& cfg) {
  require(cfg.n_words > 0, "n_words must be positive");
  require(cfg.contexts_per_word > 0, "contexts_per_word must be positive");
  require(cfg.dim > 0, "dim must be positive");
  require(cfg.freq_min > 0 && cfg.freq_min <= cfg.freq_max, "need 0 < freq_min <= freq_max");
  require(std::isfinite(cfg.radius_slope) && std::isfinite(cfg.radius_intercept),
          "radius parameters must be finite");
  require(cfg.radius_intercept + cfg.radius_slope * std::log2(static_cast<double>(cfg.freq_min)) > 0.0,
          "radius_intercept + radius_slope * log2(freq_min) must be positive");
  require(cfg.radius_intercept + cfg.radius_slope * std::log2(static_cast<double>(cfg.freq_max)) > 0.0,
          "radius_intercept + radius_slope * log2(freq_max) must be positive");
  require(cfg.noise_sigma >= 0.0 && std::isfinite(cfg.noise_sigma), "noise_sigma must be >= 0");
  require(cfg.center_norm >= 0.0 && std::isfinite(cfg.center_norm), "center_norm must be >= 0");
  if (cfg.pair_kind == PairKind::None) return;
  require(cfg.n_pairs > 0, "n_pairs must be positive when pairs are requested");
  require(cfg.dim >= 2, "pairs need dim >= 2");
  require(cfg.cosine_noise_sigma >= 0.0 && std::isfinite(cfg.cosine_noise_sigma),
          "cosine_noise_sigma must be >= 0");
  require(cfg.similarity_low <= cfg.similarity_high, "similarity_low must not exceed similarity_high");
  require(cfg.label_quantile > 0.0 && cfg.label_quantile < 1.0, "label_quantile must lie in (0, 1)");
  require(cfg.within_word_fraction >= 0.0 && cfg.within_word_fraction <= 1.0,
          "within_word_fraction must lie in [0, 1]");
  require(cfg.pair_kind != PairKind::RatedSimilarity || cfg.n_words >= 2 || cfg.within_word_fraction == 1.0,
          "across-word pairs need at least two words");
}

SynthData synth_generate(const SynthConfig& cfg) {
  validate(cfg);
  SynthData out;
  out.cohort_dump = EmbeddingDump(cfg.dim);
  out.pair_dump = EmbeddingDump(cfg.dim);

  Rng rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double log2_min = std::log2(static_cast<double>(cfg.freq_min));
  const double log2_max = std::log2(static_cast<double>(cfg.freq_max));
  const std::size_t word_width = digits_for(cfg.n_words, 4);
  const std::size_t ctx_width = digits_for(cfg.contexts_per_word, 2);

  std::vector<WordInfo> words(cfg.n_words);
  for (std::size_t w = 0; w < cfg.n_words; ++w) {
    WordInfo& info = words[w];
    info.name = padded('w', w, word_width);
    const double draw = log2_min + (log2_max - log2_min) * unit(rng);
    info.frequency = std::clamp(static_cast<std::uint64_t>(std::llround(std::exp2(draw))), cfg.freq_min,
                                cfg.freq_max);
    info.log2f = std::log2(static_cast<double>(info.frequency));
    const double log2_senses = std::max(0.0, 0.15 * (info.log2f - log2_min) + 0.75 * normal(rng));
    info.senses = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(std::exp2(log2_senses))));
    info.pos = unit(rng) < 0.5 ? PartOfSpeech::Noun : PartOfSpeech::Verb;
    out.freq.add(info.name, info.frequency);
    out.senses.add(info.name, info.senses);

    double radius = cfg.radius_intercept + cfg.radius_slope * info.log2f + cfg.noise_sigma * normal(rng);
    radius = std::max(radius, 1e-6);
    const Vector center = cfg.center_norm * unit_direction(rng, cfg.dim);
    const Vector axis = unit_direction(rng, cfg.dim);
    for (std::size_t c = 0; c < cfg.contexts_per_word; ++c) {
      Vector point;
      if (c == 0) {
        point = center + radius * axis;
      } else if (c == 1) {
        point = center - radius * axis;
      } else {
        const double dist = radius * std::pow(unit(rng), 1.0 / static_cast<double>(cfg.dim));
        point = center + dist * unit_direction(rng, cfg.dim);
      }
      out.cohort_dump.add(info.name, padded('c', c, ctx_width), std::move(point));
    }
  }

  if (cfg.pair_kind == PairKind::None) return out;

  Rng pair_rng(cfg.seed ^ kPairStream);
  std::uniform_int_distribution<std::size_t> pick(0, cfg.n_words - 1);
  std::normal_distribution<double> pair_normal(0.0, 1.0);
  std::uniform_real_distribution<double> pair_unit(0.0, 1.0);
  const std::size_t pair_width = digits_for(cfg.n_pairs, 4);

  struct Draft {
    std::size_t w1, w2;
    bool same_form;
    double rating;
  };
  std::vector<Draft> drafts(cfg.n_pairs);
  for (auto& d : drafts) {
    d.w1 = pick(pair_rng);
    d.w2 = d.w1;
    d.same_form = true;
    d.rating = 0.0;
    if (cfg.pair_kind == PairKind::WordInContext) {
      d.same_form = pair_unit(pair_rng) < 0.5;
    } else {
      d.rating = 1.0 + 9.0 * pair_unit(pair_rng);
      if (pair_unit(pair_rng) >= cfg.within_word_fraction) {
        while (d.w2 == d.w1) d.w2 = pick(pair_rng);
        d.same_form = false;
      }
    }
  }

  // Frequency rank of every pair (ties keep pair order).
  std::vector<std::size_t> order(cfg.n_pairs);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return words[drafts[a].w1].log2f < words[drafts[b].w1].log2f;
  });
  std::vector<std::uint64_t> rank(cfg.n_pairs);
  for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k;

  for (std::size_t i = 0; i < cfg.n_pairs; ++i) {
    const Draft& d = drafts[i];
    const WordInfo& a = words[d.w1];
    const WordInfo& b = words[d.w2];
    PairExample pair;
    pair.id = padded('p', i, pair_width);
    pair.lemma = a.name;
    pair.pos = a.pos;
    pair.word1 = a.name;
    pair.word2 = d.same_form || cfg.pair_kind == PairKind::RatedSimilarity ? b.name : a.name + "s";
    pair.context_id1 = pair.id + "a";
    pair.context_id2 = pair.id + "b";

    double cos = 0.0;
    if (cfg.pair_kind == PairKind::WordInContext) {
      const double u = van_der_corput(rank[i]);
      const double similarity = cfg.similarity_low + (cfg.similarity_high - cfg.similarity_low) * u;
      cos = similarity + cfg.cosine_freq_slope * (a.log2f - log2_min) +
            cfg.wordform_effect * (d.same_form ? 1.0 : 0.0) +
            cfg.sense_effect * std::log2(static_cast<double>(a.senses)) +
            cfg.cosine_noise_sigma * pair_normal(pair_rng);
      pair.human_label = u >= cfg.label_quantile;
    } else {
      const double avg_log2f = 0.5 * (a.log2f + b.log2f);
      cos = cfg.cosine_intercept + cfg.cosine_rating_slope * d.rating + cfg.cosine_freq_slope * avg_log2f +
            cfg.cosine_noise_sigma * pair_normal(pair_rng);
      pair.human_rating = d.rating;
    }
    cos = std::clamp(cos, -kCosineClip, kCosineClip);
    auto [v1, v2] = vectors_with_cosine(pair_rng, cfg.dim, cos);
    out.pair_dump.add(pair.word1, pair.context_id1, std::move(v1));
    out.pair_dump.add(pair.word2, pair.context_id2, std::move(v2));
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

}  // namespace embedgeo
