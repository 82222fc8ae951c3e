#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "embedgeo/data.hpp"

namespace embedgeo {

enum class PairKind {
  None,
  // Same-lemma pairs with T/F labels.
  WordInContext,
  // Within-word and across-word pairs with 1..10 ratings.
  RatedSimilarity,
};

/// Generator settings. Every planted quantity is an explicit field so a test
/// can read the ground truth straight from the config.
///
/// Cohorts: word i gets an integer frequency f, log-uniform in
/// [freq_min, freq_max], and a ball radius
///   R = radius_intercept + radius_slope * log2(f) + N(0, noise_sigma)
/// around a random center at distance center_norm from the origin. Two
/// contexts sit at opposite ends of a random diameter and the rest are
/// uniform inside the ball, so the cohort's minimum enclosing ball is
/// exactly that ball.
///
/// WordInContext pairs: pairs are ranked by lemma frequency and pair k in
/// that order gets the latent similarity
///   s = similarity_low + (similarity_high - similarity_low) * vdc(k)
/// with vdc the base-2 van der Corput sequence. The human label is "same"
/// iff vdc(k) >= label_quantile, so every frequency band holds the same mix
/// of labels. The observed cosine is
///   s + cosine_freq_slope * (log2 f - log2 freq_min)
///     + wordform_effect * same_wordform + sense_effect * log2(senses)
///     + N(0, cosine_noise_sigma).
///
/// RatedSimilarity pairs: rating ~ U[1, 10] and
///   cosine = cosine_intercept + cosine_rating_slope * rating
///          + cosine_freq_slope * avg log2 f + N(0, cosine_noise_sigma).
///
/// Cosines are clipped to [-0.99, 0.99] and realised exactly by the two
/// stored vectors.
struct SynthConfig {
  std::size_t n_words = 100;
  std::size_t contexts_per_word = 10;
  std::size_t dim = 64;
  std::uint64_t freq_min = 16;
  std::uint64_t freq_max = std::uint64_t{1} << 24;
  double radius_slope = 0.4;
  double radius_intercept = 1.0;
  double noise_sigma = 0.1;
  double center_norm = 20.0;
  std::uint64_t seed = 0;

  PairKind pair_kind = PairKind::None;
  std::size_t n_pairs = 0;
  double cosine_freq_slope = -0.012;
  double cosine_noise_sigma = 0.05;
  double wordform_effect = 0.0;
  double sense_effect = 0.0;
  double similarity_low = 0.45;
  double similarity_high = 0.95;
  double label_quantile = 0.5;
  double cosine_intercept = 0.6;
  double cosine_rating_slope = 0.02;
  double within_word_fraction = 0.3;
};

/// Throws InvalidConfig on non-positive counts, freq_min > freq_max, a
/// non-positive planted radius at freq_min, negative noise, or dim < 2 when
/// pairs are requested.
void validate(const SynthConfig& cfg);

struct SynthData {
  // Sibling contexts "c00".."c<k>" of every word "w0000"...
  EmbeddingDump cohort_dump;
  // Pair contexts "p<i>a" / "p<i>b", stored under word1 / word2.
  EmbeddingDump pair_dump;
  FrequencyTable freq;
  SenseTable senses;
  std::vector<PairExample> pairs;
};

/// Deterministic in cfg: the same config yields byte-identical outputs.
SynthData synth_generate(const SynthConfig& cfg);

/// Base-2 radical inverse of k.
double van_der_corput(std::uint64_t k);

}  // namespace embedgeo
