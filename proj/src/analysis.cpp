#include "embedgeo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "embedgeo/error.hpp"

namespace embedgeo {

double cosine(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "cosine of vectors with dimensions " +
                                                  std::to_string(a.size()) + " and " +
                                                  std::to_string(b.size()));
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroVector, "cosine with a zero vector");
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

const NamedFit* StudyReport::find_fit(std::string_view name) const {
  for (const auto& f : fits) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const NamedCorrelation* StudyReport::find_correlation(std::string_view name) const {
  for (const auto& c : correlations) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::optional<std::int64_t> StudyReport::count(std::string_view key) const {
  for (const auto& [k, v] : counts) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::pair<const Vector*, const Vector*> resolve_pair(const PairExample& pair, const EmbeddingDump& dump) {
  auto lookup = [&](const std::string& word, const std::string& ctx) {
    const Vector* v = dump.find(word, ctx);
    if (v == nullptr) v = dump.find(pair.lemma, ctx);
    if (v == nullptr) {
      throw Error(ErrorCode::UnresolvedContext,
                  "pair " + pair.id + ": no embedding for (" + word + ", " + ctx + ")");
    }
    return v;
  };
  return {lookup(pair.word1, pair.context_id1), lookup(pair.word2, pair.context_id2)};
}

double pair_cosine(const PairExample& pair, const EmbeddingDump& dump) {
  const auto [a, b] = resolve_pair(pair, dump);
  return cosine(*a, *b);
}

namespace {

void record_flat(StudyReport& report, const NamedFit& fit) {
  if (fit.fit.flat_response) {
    report.notes.push_back(fit.name + ": FlatResponse (constant response, R^2 undefined)");
  }
}

void add_fit(StudyReport& report, std::string name, const std::string& response_name,
             const std::vector<double>& response, const std::vector<Column>& columns) {
  NamedFit named{std::move(name), ols_fit(make_design(response_name, response, columns))};
  record_flat(report, named);
  report.fits.push_back(std::move(named));
}

std::optional<double> log2_count(const CountTable& table, std::string_view word) {
  const auto c = table.find(word);
  if (!c) return std::nullopt;
  return std::log2(static_cast<double>(*c));
}

std::optional<double> avg_log2(const CountTable& table, const PairExample& p) {
  const auto a = log2_count(table, p.word1);
  const auto b = log2_count(table, p.word2);
  if (!a || !b) return std::nullopt;
  return 0.5 * (*a + *b);
}

// Frequency key of a pair: lemma first, then the average over both words.
std::optional<double> pair_frequency_key(const FrequencyTable& freq, const PairExample& p) {
  if (auto f = log2_count(freq, p.lemma)) return f;
  return avg_log2(freq, p);
}

}  // namespace

StudyReport wic_regressions(const std::vector<PairExample>& pairs, const EmbeddingDump& dump,
                            const FrequencyTable& freq, const SenseTable& senses) {
  StudyReport report;
  report.study = "wic_regressions";

  struct Split {
    std::vector<double> cosine, log_freq, log_senses, same_wordform, is_noun;
  };
  Split different;
  Split same;
  std::int64_t missing_freq = 0;
  std::int64_t missing_senses = 0;
  for (const auto& p : pairs) {
    if (!p.human_label) throw Error(ErrorCode::MissingLabel, "pair " + p.id + " has no T/F label");
    const auto lf = log2_count(freq, p.lemma);
    const auto ls = log2_count(senses, p.lemma);
    if (!lf) ++missing_freq;
    if (!ls) ++missing_senses;
    if (!lf || !ls) continue;
    Split& split = *p.human_label ? same : different;
    split.cosine.push_back(pair_cosine(p, dump));
    split.log_freq.push_back(*lf);
    split.log_senses.push_back(*ls);
    split.same_wordform.push_back(p.same_wordform() ? 1.0 : 0.0);
    split.is_noun.push_back(p.pos == PartOfSpeech::Noun ? 1.0 : 0.0);
  }
  report.counts = {{"pairs_total", static_cast<std::int64_t>(pairs.size())},
                   {"excluded_missing_frequency", missing_freq},
                   {"excluded_missing_senses", missing_senses},
                   {"different_n", static_cast<std::int64_t>(different.cosine.size())},
                   {"same_n", static_cast<std::int64_t>(same.cosine.size())}};

  for (const auto& [label, split] : {std::pair<std::string, const Split*>{"different", &different},
                                     std::pair<std::string, const Split*>{"same", &same}}) {
    if (split->cosine.empty()) {
      throw Error(ErrorCode::EmptySplit, "no usable pairs labelled '" + label + "'");
    }
    const Column f{"log2(freq)", split->log_freq};
    const Column s{"log2(senses)", split->log_senses};
    const Column w{"same_wordform", split->same_wordform};
    const Column n{"is_noun", split->is_noun};
    const std::string y = "cosine_similarity";
    add_fit(report, label + "/model1", y, split->cosine, {f});
    add_fit(report, label + "/model2", y, split->cosine, {f, s});
    add_fit(report, label + "/model3", y, split->cosine, {f, s, w});
    add_fit(report, label + "/model4", y, split->cosine, {f, s, w, n});
  }
  return report;
}

StudyReport scws_regressions(const std::vector<PairExample>& pairs, const EmbeddingDump& dump,
                             const FrequencyTable& freq, const SenseTable& senses) {
  StudyReport report;
  report.study = "scws_regressions";

  struct Split {
    std::vector<double> cosine, avg_freq, avg_sense, rating, same_word;
  };
  Split within;
  Split across;
  Split all;
  std::int64_t missing_freq = 0;
  std::int64_t missing_senses = 0;
  for (const auto& p : pairs) {
    if (!p.human_rating) throw Error(ErrorCode::MissingRating, "pair " + p.id + " has no rating");
    const auto lf = avg_log2(freq, p);
    const auto ls = avg_log2(senses, p);
    if (!lf) ++missing_freq;
    if (!ls) ++missing_senses;
    if (!lf || !ls) continue;
    const double c = pair_cosine(p, dump);
    const bool same_word = p.same_wordform();
    for (Split* split : {same_word ? &within : &across, &all}) {
      split->cosine.push_back(c);
      split->avg_freq.push_back(*lf);
      split->avg_sense.push_back(*ls);
      split->rating.push_back(*p.human_rating);
      split->same_word.push_back(same_word ? 1.0 : 0.0);
    }
  }
  report.counts = {{"pairs_total", static_cast<std::int64_t>(pairs.size())},
                   {"excluded_missing_frequency", missing_freq},
                   {"excluded_missing_senses", missing_senses},
                   {"within_n", static_cast<std::int64_t>(within.cosine.size())},
                   {"across_n", static_cast<std::int64_t>(across.cosine.size())}};

  const std::string cos_name = "cosine_similarity";
  for (const auto& [label, split] : {std::pair<std::string, const Split*>{"within", &within},
                                     std::pair<std::string, const Split*>{"across", &across}}) {
    if (split->cosine.empty()) {
      throw Error(ErrorCode::EmptySplit, "no usable " + label + "-word pairs");
    }
    const Column f{"avg_freq", split->avg_freq};
    const Column r{"average_rating", split->rating};
    const Column s{"avg_sense", split->avg_sense};
    add_fit(report, label + "/model1", cos_name, split->cosine, {f});
    add_fit(report, label + "/model2", cos_name, split->cosine, {r});
    add_fit(report, label + "/model3", cos_name, split->cosine, {f, r});
    add_fit(report, label + "/model4", cos_name, split->cosine, {f, r, s});
  }

  const Column f{"avg_freq", all.avg_freq};
  const Column s{"avg_sense", all.avg_sense};
  const Column c{cos_name, all.cosine};
  const Column w{"same_word", all.same_word};
  const std::string y = "average_rating";
  add_fit(report, "rating/model1", y, all.rating, {f});
  add_fit(report, "rating/model2", y, all.rating, {c});
  add_fit(report, "rating/model3", y, all.rating, {f, s, c});
  add_fit(report, "rating/model4", y, all.rating, {s, c, w});
  add_fit(report, "rating/model5", y, all.rating, {f, s, c, w});
  return report;
}

double threshold_accuracy(const std::vector<PairExample>& pairs, const EmbeddingDump& dump,
                          double threshold) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "no pairs to score");
  std::size_t correct = 0;
  for (const auto& p : pairs) {
    if (!p.human_label) throw Error(ErrorCode::MissingLabel, "pair " + p.id + " has no T/F label");
    const bool predicted = pair_cosine(p, dump) >= threshold;
    if (predicted == *p.human_label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

ThresholdResult threshold_tune(const std::vector<PairExample>& train_pairs, const EmbeddingDump& dump) {
  std::vector<std::pair<double, bool>> scored;
  scored.reserve(train_pairs.size());
  std::size_t positives = 0;
  for (const auto& p : train_pairs) {
    if (!p.human_label) throw Error(ErrorCode::MissingLabel, "pair " + p.id + " has no T/F label");
    scored.emplace_back(pair_cosine(p, dump), *p.human_label);
    if (*p.human_label) ++positives;
  }
  if (positives == 0 || positives == scored.size()) {
    throw Error(ErrorCode::SingleClassTraining, "training pairs need both labels");
  }
  std::sort(scored.begin(), scored.end());

  // Sweep from high to low thresholds would also work; going up keeps the
  // "smallest threshold wins ties" rule a strict comparison.
  const auto n = scored.size();
  // Predictions at a candidate between scored[i-1] and scored[i]: items >= i are "same".
  std::size_t tp_above = positives;  // positives at or above the current cut
  std::size_t neg_below = 0;         // negatives strictly below the cut
  ThresholdResult best;
  best.n = n;
  bool have_candidate = false;
  for (std::size_t i = 1; i < n; ++i) {
    if (scored[i - 1].second) {
      --tp_above;
    } else {
      ++neg_below;
    }
    if (scored[i].first == scored[i - 1].first) continue;
    const double accuracy = static_cast<double>(tp_above + neg_below) / static_cast<double>(n);
    if (!have_candidate || accuracy > best.train_accuracy) {
      best.threshold = 0.5 * (scored[i - 1].first + scored[i].first);
      best.train_accuracy = accuracy;
      have_candidate = true;
    }
  }
  if (!have_candidate) {
    best.threshold = scored.front().first;
    best.train_accuracy = static_cast<double>(positives) / static_cast<double>(n);
  }
  return best;
}

BinnedAgreement binned_agreement(const std::vector<PairExample>& pairs, const EmbeddingDump& dump,
                                 const FrequencyTable& freq, double threshold, std::size_t n_bins) {
  std::vector<double> keys;
  Column model{"model_same_fraction", {}};
  Column human{"human_same_fraction", {}};
  BinnedAgreement out;
  for (const auto& p : pairs) {
    if (!p.human_label) throw Error(ErrorCode::MissingLabel, "pair " + p.id + " has no T/F label");
    const auto key = pair_frequency_key(freq, p);
    if (!key) {
      ++out.n_excluded;
      continue;
    }
    keys.push_back(*key);
    model.values.push_back(pair_cosine(p, dump) >= threshold ? 1.0 : 0.0);
    human.values.push_back(*p.human_label ? 1.0 : 0.0);
  }
  out.n_used = keys.size();
  out.summary = equal_count_bins(keys, {model, human}, n_bins);
  return out;
}

ResidualStudy residual_study(const std::vector<PairExample>& pairs, const EmbeddingDump& dump,
                             const FrequencyTable& freq, std::size_t train_n, std::uint64_t seed) {
  struct Row {
    double cosine, rating, log_freq;
  };
  std::vector<Row> rows;
  ResidualStudy out;
  for (const auto& p : pairs) {
    if (!p.human_rating) throw Error(ErrorCode::MissingRating, "pair " + p.id + " has no rating");
    const auto lf = avg_log2(freq, p);
    if (!lf) {
      ++out.n_excluded;
      continue;
    }
    rows.push_back({pair_cosine(p, dump), *p.human_rating, *lf});
  }
  if (rows.size() <= train_n + 2) {
    throw Error(ErrorCode::TooFewRows, std::to_string(rows.size()) + " usable pairs for a train split of " +
                                           std::to_string(train_n) + " (need 3 held out)");
  }
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> train_cos;
  std::vector<double> train_rating;
  for (std::size_t i = 0; i < train_n; ++i) {
    train_cos.push_back(rows[order[i]].cosine);
    train_rating.push_back(rows[order[i]].rating);
  }
  out.train_fit = ols_fit(make_design("cosine_similarity", train_cos, {{"average_rating", train_rating}}));
  const double b0 = out.train_fit.coef[0];
  const double b1 = out.train_fit.coef[1];

  std::vector<double> residual;
  std::vector<double> log_freq;
  for (std::size_t i = train_n; i < order.size(); ++i) {
    const Row& r = rows[order[i]];
    residual.push_back(r.cosine - (b0 + b1 * r.rating));
    log_freq.push_back(r.log_freq);
  }
  out.n_train = train_n;
  out.n_eval = residual.size();
  out.correlation = pearson(residual, log_freq);
  return out;
}

RadiusStudy radius_frequency_study(const std::vector<SiblingCohort>& cohorts, double tol,
                                   const PairData& pair_data) {
  RadiusStudy out;
  StudyReport& report = out.report;
  report.study = "radius_frequency_study";

  std::int64_t too_small = 0;
  std::int64_t missing_freq = 0;
  for (const auto& c : cohorts) {
    if (c.embeddings.size() < 2) {
      ++too_small;
      continue;
    }
    if (!c.frequency) {
      ++missing_freq;
      continue;
    }
    out.per_word.push_back({c.word, *c.frequency, c.sense_count, cohort_variation(c, tol)});
  }
  report.counts = {{"cohorts_total", static_cast<std::int64_t>(cohorts.size())},
                   {"excluded_fewer_than_two", too_small},
                   {"excluded_missing_frequency", missing_freq},
                   {"cohorts_used", static_cast<std::int64_t>(out.per_word.size())}};

  std::vector<double> log_freq;
  std::vector<std::vector<double>> metric(6);
  for (const auto& m : out.per_word) {
    log_freq.push_back(std::log2(static_cast<double>(m.frequency)));
    const auto& v = m.variation;
    const double values[6] = {v.radius_meb, v.avg_pairwise_dist, v.max_pairwise_dist,
                              v.var_pairwise_dist, v.avg_norm, v.hull_area_2d};
    for (int i = 0; i < 6; ++i) metric[static_cast<std::size_t>(i)].push_back(values[i]);
  }
  const char* metric_names[6] = {"radius_meb", "avg_pairwise_dist", "max_pairwise_dist",
                                 "var_pairwise_dist", "avg_norm", "hull_area_2d"};
  for (std::size_t i = 0; i < 6; ++i) {
    NamedCorrelation nc;
    nc.name = metric_names[i];
    nc.n = log_freq.size();
    try {
      nc.value = pearson(log_freq, metric[i]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ConstantSeries && e.code() != ErrorCode::TooFewPoints) throw;
      nc.note = std::string(to_string(e.code()));
      report.notes.push_back(nc.name + ": " + nc.note + " (null result)");
    }
    report.correlations.push_back(std::move(nc));
  }

  const std::string y = "radius";
  if (log_freq.size() >= 3) {
    add_fit(report, "radius~freq", y, metric[0], {{"log2(freq)", log_freq}});
  } else {
    report.notes.push_back("radius fits skipped: fewer than 3 cohorts");
  }

  std::vector<double> r_s;
  std::vector<double> lf_s;
  std::vector<double> ls_s;
  for (std::size_t i = 0; i < out.per_word.size(); ++i) {
    if (!out.per_word[i].sense_count) continue;
    r_s.push_back(metric[0][i]);
    lf_s.push_back(log_freq[i]);
    ls_s.push_back(std::log2(static_cast<double>(*out.per_word[i].sense_count)));
  }
  report.counts.emplace_back("cohorts_with_senses", static_cast<std::int64_t>(r_s.size()));
  if (r_s.size() >= 4) {
    add_fit(report, "radius~senses", y, r_s, {{"log2(senses)", ls_s}});
    add_fit(report, "radius~freq+senses", y, r_s, {{"log2(freq)", lf_s}, {"log2(senses)", ls_s}});
  } else if (!out.per_word.empty()) {
    report.notes.push_back("sense fits skipped: fewer than 4 cohorts with sense counts");
  }

  if (pair_data.pairs != nullptr && pair_data.dump != nullptr) {
    std::map<std::string, double, std::less<>> radius_of;
    for (const auto& m : out.per_word) radius_of.emplace(m.word, m.variation.radius_meb);
    std::vector<double> cos;
    std::vector<double> rad;
    std::int64_t unmatched = 0;
    for (const auto& p : *pair_data.pairs) {
      const auto it = radius_of.find(p.lemma);
      if (it == radius_of.end()) {
        ++unmatched;
        continue;
      }
      cos.push_back(pair_cosine(p, *pair_data.dump));
      rad.push_back(it->second);
    }
    report.counts.emplace_back("pairs_with_radius", static_cast<std::int64_t>(cos.size()));
    report.counts.emplace_back("pairs_without_cohort", unmatched);
    add_fit(report, "cosine~radius", "cosine_similarity", cos, {{"radius", rad}});
  }
  return out;
}

}  // namespace embedgeo
