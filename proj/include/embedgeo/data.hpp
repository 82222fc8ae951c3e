#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "embedgeo/geometry.hpp"

namespace embedgeo {

// ---------------------------------------------------------------------------
// Embedding dumps
//
//   #embdump v1 dim=<D>
//   word<TAB>context_id<TAB>v1,v2,...,vD
//
// Other '#' lines are comments, blank lines are ignored.
// ---------------------------------------------------------------------------

struct EmbeddingRecord {
  std::string word;
  std::string context_id;
  Vector vector;
};

class EmbeddingDump {
 public:
  EmbeddingDump() = default;
  explicit EmbeddingDump(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const std::vector<EmbeddingRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  /// Throws DimensionMismatch, NonFiniteValue or DuplicateRecord.
  void add(std::string word, std::string context_id, Vector vector);

  const Vector* find(std::string_view word, std::string_view context_id) const;

 private:
  std::size_t dim_ = 0;
  std::vector<EmbeddingRecord> records_;
  std::map<std::pair<std::string, std::string>, std::size_t, std::less<>> index_;
};

EmbeddingDump parse_embedding_dump(std::istream& in, const std::string& source = "<stream>");
EmbeddingDump load_embedding_dump(const std::filesystem::path& path);
/// Coordinates are written with 9 significant digits.
void write_embedding_dump(const EmbeddingDump& dump, std::ostream& out);
void save_embedding_dump(const EmbeddingDump& dump, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Count tables: word<TAB>count, count a positive integer.
// ---------------------------------------------------------------------------

class CountTable {
 public:
  /// Throws MalformedRow for empty words or words with tab/newline,
  /// NonPositiveCount for zero, DuplicateRecord for repeated words.
  void add(std::string word, std::uint64_t count);
  std::optional<std::uint64_t> find(std::string_view word) const;
  const std::map<std::string, std::uint64_t, std::less<>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::uint64_t, std::less<>> entries_;
};

/// Occurrence counts in the training corpus.
struct FrequencyTable : CountTable {};
/// Number of senses in a sense inventory.
struct SenseTable : CountTable {};

FrequencyTable parse_frequency_table(std::istream& in, const std::string& source = "<stream>");
SenseTable parse_sense_table(std::istream& in, const std::string& source = "<stream>");
FrequencyTable load_frequency_table(const std::filesystem::path& path);
SenseTable load_sense_table(const std::filesystem::path& path);
void write_count_table(const CountTable& table, std::ostream& out);
void save_count_table(const CountTable& table, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Word pairs in context:
//   id lemma pos word1 word2 context_id1 context_id2 label|rating
// label is T or F (binary same/different meaning); rating a real in [1, 10].
// ---------------------------------------------------------------------------

enum class PartOfSpeech { Noun, Verb, Other };

std::string_view to_string(PartOfSpeech pos);
/// "noun"/"n" and "verb"/"v" in any case; everything else is Other.
PartOfSpeech parse_part_of_speech(std::string_view text);

struct PairExample {
  std::string id;
  std::string lemma;
  PartOfSpeech pos = PartOfSpeech::Other;
  std::string word1;
  std::string word2;
  std::string context_id1;
  std::string context_id2;
  std::optional<bool> human_label;     // true = same meaning
  std::optional<double> human_rating;  // 1..10

  /// Case-insensitive equality of the two surface forms.
  bool same_wordform() const;
};

std::vector<PairExample> parse_pairs(std::istream& in, const std::string& source = "<stream>");
std::vector<PairExample> load_pairs(const std::filesystem::path& path);
void write_pairs(const std::vector<PairExample>& pairs, std::ostream& out);
void save_pairs(const std::vector<PairExample>& pairs, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Corpus counting
// ---------------------------------------------------------------------------

/// Tokens are maximal runs of ASCII letters, ASCII digits and bytes >= 0x80
/// (so UTF-8 multibyte letters stay inside words); everything else splits.
/// Without case sensitivity ASCII letters are folded to lower case.
FrequencyTable count_corpus_frequencies(const std::vector<std::filesystem::path>& corpus_paths,
                                        bool case_sensitive = true);
void count_tokens(std::istream& in, bool case_sensitive,
                  std::map<std::string, std::uint64_t, std::less<>>& counts);

// ---------------------------------------------------------------------------
// Sibling cohorts
// ---------------------------------------------------------------------------

struct SiblingCohort {
  std::string word;
  std::vector<std::string> context_ids;  // sorted
  std::vector<Vector> embeddings;        // parallel to context_ids
  std::optional<std::uint64_t> frequency;
  std::optional<std::uint64_t> sense_count;

  bool metadata_complete() const { return frequency.has_value() && sense_count.has_value(); }
};

/// One cohort per distinct word in the dump, sorted by word; embeddings are
/// ordered by context id.
std::vector<SiblingCohort> assemble_cohorts(const EmbeddingDump& dump, const FrequencyTable& freq,
                                            const SenseTable& senses);

VariationReport cohort_variation(const SiblingCohort& cohort, double tol = kDefaultTol);

// Shared line helpers for the TSV readers.
namespace detail {
std::vector<std::string_view> split(std::string_view line, char sep);
std::string format_double(double value, int significant_digits);
}  // namespace detail

}  // namespace embedgeo
