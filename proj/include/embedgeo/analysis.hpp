#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "embedgeo/data.hpp"
#include "embedgeo/geometry.hpp"
#include "embedgeo/stats.hpp"

namespace embedgeo {

/// dot(a, b) / (|a| |b|), clamped to [-1, 1].
double cosine(const Vector& a, const Vector& b);

struct NamedFit {
  std::string name;
  OlsFit fit;
};

struct NamedCorrelation {
  std::string name;
  std::size_t n = 0;
  // Empty when undefined (e.g. a constant series); `note` then says why.
  std::optional<Correlation> value;
  std::string note;
};

/// Self-describing result of one study: every fit carries its feature list
/// and number of observations.
struct StudyReport {
  std::string study;
  std::vector<NamedFit> fits;
  std::vector<NamedCorrelation> correlations;
  std::optional<BinnedSummary> bins;
  // Dataset sizes and exclusions, in insertion order.
  std::vector<std::pair<std::string, std::int64_t>> counts;
  std::vector<std::string> notes;

  const NamedFit* find_fit(std::string_view name) const;
  const NamedCorrelation* find_correlation(std::string_view name) const;
  std::optional<std::int64_t> count(std::string_view key) const;
};

/// The two vectors of a pair. Each side is looked up as (word, context_id)
/// and then as (lemma, context_id); throws UnresolvedContext otherwise.
std::pair<const Vector*, const Vector*> resolve_pair(const PairExample& pair,
                                                     const EmbeddingDump& dump);

double pair_cosine(const PairExample& pair, const EmbeddingDump& dump);

/// WiC-style battery: four nested models (log2(freq); + log2(senses);
/// + same_wordform; + is_noun) fit separately on the "different" and "same"
/// meaning splits. Fits are named "<split>/model<k>". Pairs whose lemma lacks
/// frequency or sense data are excluded and counted.
StudyReport wic_regressions(const std::vector<PairExample>& pairs, const EmbeddingDump& dump,
                            const FrequencyTable& freq, const SenseTable& senses);

/// SCWS-style battery. Cosine models on the within-word and across-word
/// splits ("within/model1".."across/model4": avg_freq; average_rating;
/// avg_freq + average_rating; + avg_sense) and rating models on all pairs
/// ("rating/model1".."rating/model5"). Frequency and sense features are the
/// average of log2 over both words.
StudyReport scws_regressions(const std::vector<PairExample>& pairs, const EmbeddingDump& dump,
                             const FrequencyTable& freq, const SenseTable& senses);

struct ThresholdResult {
  double threshold = 0.0;
  double train_accuracy = 0.0;
  std::size_t n = 0;
};

/// Accuracy of "same meaning iff cosine >= threshold" over labelled pairs.
double threshold_accuracy(const std::vector<PairExample>& pairs, const EmbeddingDump& dump,
                          double threshold);

/// Sweeps the midpoints between consecutive distinct cosines and keeps the
/// most accurate one, preferring the smallest threshold on ties. If every
/// cosine is identical that single value is the only candidate.
ThresholdResult threshold_tune(const std::vector<PairExample>& train_pairs, const EmbeddingDump& dump);

struct BinnedAgreement {
  // Columns "model_same_fraction" and "human_same_fraction"; keys are
  // log2 frequencies.
  BinnedSummary summary;
  std::size_t n_used = 0;
  std::size_t n_excluded = 0;
};

/// Equal-count frequency bins of labelled pairs with the fraction predicted
/// same by the cosine threshold next to the fraction labelled same. The key
/// is log2 frequency of the lemma, or the average over both words when the
/// lemma has no entry.
BinnedAgreement binned_agreement(const std::vector<PairExample>& pairs, const EmbeddingDump& dump,
                                 const FrequencyTable& freq, double threshold,
                                 std::size_t n_bins = 10);

struct ResidualStudy {
  Correlation correlation;  // Pearson(true - predicted cosine, avg log2 freq)
  OlsFit train_fit;         // cosine ~ constant + average_rating
  std::size_t n_train = 0;
  std::size_t n_eval = 0;
  std::size_t n_excluded = 0;
};

/// Fits cosine on rating over a seeded random subset of `train_n` rated
/// pairs and correlates held-out residuals with average log2 frequency.
ResidualStudy residual_study(const std::vector<PairExample>& pairs, const EmbeddingDump& dump,
                             const FrequencyTable& freq, std::size_t train_n, std::uint64_t seed);

struct CohortMeasurement {
  std::string word;
  std::uint64_t frequency = 0;
  std::optional<std::uint64_t> sense_count;
  VariationReport variation;
};

struct RadiusStudy {
  StudyReport report;
  std::vector<CohortMeasurement> per_word;  // sorted by word
};

struct PairData {
  const std::vector<PairExample>* pairs = nullptr;
  const EmbeddingDump* dump = nullptr;
};

/// Correlates every variation metric with log2 frequency (the MEB radius
/// first, as "radius_meb"), fits radius on log2(freq), log2(senses) and both,
/// and when pair data is given fits pair cosine on the lemma's MEB radius.
RadiusStudy radius_frequency_study(const std::vector<SiblingCohort>& cohorts, double tol = kDefaultTol,
                                   const PairData& pair_data = {});

}  // namespace embedgeo
