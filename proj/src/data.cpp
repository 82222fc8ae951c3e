#include "embedgeo/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "embedgeo/error.hpp"

namespace embedgeo {

namespace detail {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string format_double(double value, int significant_digits) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general,
                                 significant_digits);
  return std::string(buf, res.ptr);
}

}  // namespace detail

namespace {

// Calls fn(line_number, line) for every line, with a trailing '\r' removed.
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fn(number, std::string_view(line));
  }
}

bool skippable(std::string_view line) { return line.empty() || line.front() == '#'; }

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot open file", path.string(), 0);
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::UnreadableFile, "cannot write file", path.string(), 0);
  return out;
}

bool parse_real(std::string_view text, double& value) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

bool parse_unsigned(std::string_view text, std::uint64_t& value) {
  if (text.empty()) return false;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

bool valid_token(std::string_view s) {
  return !s.empty() && s.find_first_of("\t\n\r") == std::string_view::npos;
}

}  // namespace

// --- EmbeddingDump ---------------------------------------------------------

EmbeddingDump::EmbeddingDump(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(ErrorCode::MalformedHeader, "dimension must be positive");
}

void EmbeddingDump::add(std::string word, std::string context_id, Vector vector) {
  if (static_cast<std::size_t>(vector.size()) != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "vector has " + std::to_string(vector.size()) +
                                                  " values, dump dimension is " + std::to_string(dim_));
  }
  if (!vector.allFinite()) throw Error(ErrorCode::NonFiniteValue, "vector has non-finite values");
  if (!valid_token(word) || !valid_token(context_id)) {
    throw Error(ErrorCode::MalformedRow, "word and context id must be nonempty without tabs");
  }
  auto key = std::make_pair(word, context_id);
  if (index_.contains(key)) {
    throw Error(ErrorCode::DuplicateRecord, "duplicate record (" + word + ", " + context_id + ")");
  }
  index_.emplace(std::move(key), records_.size());
  records_.push_back({std::move(word), std::move(context_id), std::move(vector)});
}

const Vector* EmbeddingDump::find(std::string_view word, std::string_view context_id) const {
  const auto it = index_.find(std::make_pair(std::string(word), std::string(context_id)));
  return it == index_.end() ? nullptr : &records_[it->second].vector;
}

EmbeddingDump parse_embedding_dump(std::istream& in, const std::string& source) {
  std::optional<EmbeddingDump> dump;
  for_each_line(in, [&](std::size_t line_no, std::string_view line) {
    if (!dump) {
      if (line.empty()) return;
      constexpr std::string_view kPrefix = "#embdump v1 dim=";
      std::uint64_t dim = 0;
      if (!line.starts_with(kPrefix) || !parse_unsigned(line.substr(kPrefix.size()), dim) || dim == 0) {
        throw Error(ErrorCode::MalformedHeader, "expected '#embdump v1 dim=<D>'", source, line_no);
      }
      dump.emplace(static_cast<std::size_t>(dim));
      return;
    }
    if (skippable(line)) return;
    const auto fields = detail::split(line, '\t');
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorCode::MalformedRow, "expected word<TAB>context_id<TAB>values", source, line_no);
    }
    const auto values = detail::split(fields[2], ',');
    if (values.size() != dump->dim()) {
      throw Error(ErrorCode::DimensionMismatch,
                  std::to_string(values.size()) + " values, expected " + std::to_string(dump->dim()),
                  source, line_no);
    }
    Vector v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
      double x = 0.0;
      if (!parse_real(values[i], x)) {
        throw Error(ErrorCode::MalformedRow, "bad number '" + std::string(values[i]) + "'", source,
                    line_no);
      }
      if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteValue, "non-finite value", source, line_no);
      v(static_cast<Eigen::Index>(i)) = x;
    }
    try {
      dump->add(std::string(fields[0]), std::string(fields[1]), std::move(v));
    } catch (const Error& e) {
      throw Error(e.code(), "record (" + std::string(fields[0]) + ", " + std::string(fields[1]) + ")",
                  source, line_no);
    }
  });
  if (!dump) throw Error(ErrorCode::MalformedHeader, "missing '#embdump v1 dim=<D>' header", source, 1);
  return std::move(*dump);
}

EmbeddingDump load_embedding_dump(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_embedding_dump(in, path.string());
}

void write_embedding_dump(const EmbeddingDump& dump, std::ostream& out) {
  out << "#embdump v1 dim=" << dump.dim() << '\n';
  std::string line;
  for (const auto& rec : dump.records()) {
    line.clear();
    line += rec.word;
    line += '\t';
    line += rec.context_id;
    line += '\t';
    for (Eigen::Index i = 0; i < rec.vector.size(); ++i) {
      if (i > 0) line += ',';
      line += detail::format_double(rec.vector(i), 9);
    }
    line += '\n';
    out << line;
  }
}

void save_embedding_dump(const EmbeddingDump& dump, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_embedding_dump(dump, out);
}

// --- Count tables ----------------------------------------------------------

void CountTable::add(std::string word, std::uint64_t count) {
  if (!valid_token(word)) throw Error(ErrorCode::MalformedRow, "word must be nonempty without tabs");
  if (count == 0) throw Error(ErrorCode::NonPositiveCount, "count for '" + word + "' is zero");
  if (entries_.contains(word)) throw Error(ErrorCode::DuplicateRecord, "duplicate word '" + word + "'");
  entries_.emplace(std::move(word), count);
}

std::optional<std::uint64_t> CountTable::find(std::string_view word) const {
  const auto it = entries_.find(word);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

namespace {

void parse_count_table(std::istream& in, const std::string& source, CountTable& table) {
  for_each_line(in, [&](std::size_t line_no, std::string_view line) {
    if (skippable(line)) return;
    const auto fields = detail::split(line, '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error(ErrorCode::MalformedRow, "expected word<TAB>count", source, line_no);
    }
    std::uint64_t count = 0;
    if (!parse_unsigned(fields[1], count)) {
      // Negative or zero-like values are a count problem, anything else a format problem.
      double as_real = 0.0;
      if (parse_real(fields[1], as_real) && as_real <= 0.0) {
        throw Error(ErrorCode::NonPositiveCount, "count must be a positive integer", source, line_no);
      }
      throw Error(ErrorCode::MalformedRow, "bad count '" + std::string(fields[1]) + "'", source, line_no);
    }
    try {
      table.add(std::string(fields[0]), count);
    } catch (const Error& e) {
      throw Error(e.code(), "word '" + std::string(fields[0]) + "'", source, line_no);
    }
  });
}

}  // namespace

FrequencyTable parse_frequency_table(std::istream& in, const std::string& source) {
  FrequencyTable table;
  parse_count_table(in, source, table);
  return table;
}

SenseTable parse_sense_table(std::istream& in, const std::string& source) {
  SenseTable table;
  parse_count_table(in, source, table);
  return table;
}

FrequencyTable load_frequency_table(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_frequency_table(in, path.string());
}

SenseTable load_sense_table(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_sense_table(in, path.string());
}

void write_count_table(const CountTable& table, std::ostream& out) {
  for (const auto& [word, count] : table.entries()) out << word << '\t' << count << '\n';
}

void save_count_table(const CountTable& table, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_count_table(table, out);
}

// --- Pairs -----------------------------------------------------------------

std::string_view to_string(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::Noun: return "noun";
    case PartOfSpeech::Verb: return "verb";
    case PartOfSpeech::Other: return "other";
  }
  return "other";
}

PartOfSpeech parse_part_of_speech(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "noun" || lower == "n") return PartOfSpeech::Noun;
  if (lower == "verb" || lower == "v") return PartOfSpeech::Verb;
  return PartOfSpeech::Other;
}

bool PairExample::same_wordform() const {
  return std::equal(word1.begin(), word1.end(), word2.begin(), word2.end(), [](char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
  });
}

std::vector<PairExample> parse_pairs(std::istream& in, const std::string& source) {
  std::vector<PairExample> pairs;
  std::map<std::string, std::size_t, std::less<>> ids;
  for_each_line(in, [&](std::size_t line_no, std::string_view line) {
    if (skippable(line)) return;
    const auto f = detail::split(line, '\t');
    if (f.size() != 8) {
      throw Error(ErrorCode::MalformedRow, "expected 8 tab-separated columns, found " +
                                               std::to_string(f.size()), source, line_no);
    }
    for (std::size_t i : {0u, 1u, 3u, 4u, 5u, 6u}) {
      if (f[i].empty()) throw Error(ErrorCode::MalformedRow, "empty column", source, line_no);
    }
    PairExample p;
    p.id = f[0];
    p.lemma = f[1];
    p.pos = parse_part_of_speech(f[2]);
    p.word1 = f[3];
    p.word2 = f[4];
    p.context_id1 = f[5];
    p.context_id2 = f[6];
    if (f[7] == "T") {
      p.human_label = true;
    } else if (f[7] == "F") {
      p.human_label = false;
    } else {
      double rating = 0.0;
      if (!parse_real(f[7], rating)) {
        throw Error(ErrorCode::MalformedRow, "last column must be T, F or a rating", source, line_no);
      }
      if (!(rating >= 1.0 && rating <= 10.0)) {
        throw Error(ErrorCode::BadRating, "rating " + std::string(f[7]) + " outside [1, 10]", source,
                    line_no);
      }
      p.human_rating = rating;
    }
    if (ids.contains(p.id)) throw Error(ErrorCode::DuplicateRecord, "duplicate id " + p.id, source, line_no);
    ids.emplace(p.id, line_no);
    pairs.push_back(std::move(p));
  });
  return pairs;
}

std::vector<PairExample> load_pairs(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_pairs(in, path.string());
}

void write_pairs(const std::vector<PairExample>& pairs, std::ostream& out) {
  for (const auto& p : pairs) {
    out << p.id << '\t' << p.lemma << '\t' << to_string(p.pos) << '\t' << p.word1 << '\t' << p.word2
        << '\t' << p.context_id1 << '\t' << p.context_id2 << '\t';
    if (p.human_label) {
      out << (*p.human_label ? "T" : "F");
    } else if (p.human_rating) {
      out << detail::format_double(*p.human_rating, 17);
    }
    out << '\n';
  }
}

void save_pairs(const std::vector<PairExample>& pairs, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_pairs(pairs, out);
}

// --- Corpus counting -------------------------------------------------------

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

}  // namespace

void count_tokens(std::istream& in, bool case_sensitive,
                  std::map<std::string, std::uint64_t, std::less<>>& counts) {
  std::string token;
  char buf[1 << 16];
  auto flush = [&] {
    if (token.empty()) return;
    auto it = counts.find(token);
    if (it == counts.end()) {
      counts.emplace(token, 1);
    } else {
      ++it->second;
    }
    token.clear();
  };
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const auto got = static_cast<std::size_t>(in.gcount());
    for (std::size_t i = 0; i < got; ++i) {
      const auto c = static_cast<unsigned char>(buf[i]);
      if (is_word_byte(c)) {
        token.push_back(case_sensitive || c >= 0x80 ? static_cast<char>(c)
                                                    : static_cast<char>(std::tolower(c)));
      } else {
        flush();
      }
    }
  }
  flush();
}

FrequencyTable count_corpus_frequencies(const std::vector<std::filesystem::path>& corpus_paths,
                                        bool case_sensitive) {
  std::map<std::string, std::uint64_t, std::less<>> counts;
  for (const auto& path : corpus_paths) {
    auto in = open_input(path);
    count_tokens(in, case_sensitive, counts);
    if (in.bad()) throw Error(ErrorCode::UnreadableFile, "read failure", path.string(), 0);
  }
  FrequencyTable table;
  for (auto& [word, count] : counts) table.add(word, count);
  return table;
}

// --- Cohorts ---------------------------------------------------------------

std::vector<SiblingCohort> assemble_cohorts(const EmbeddingDump& dump, const FrequencyTable& freq,
                                            const SenseTable& senses) {
  std::map<std::string, std::vector<const EmbeddingRecord*>, std::less<>> by_word;
  for (const auto& rec : dump.records()) by_word[rec.word].push_back(&rec);

  std::vector<SiblingCohort> cohorts;
  cohorts.reserve(by_word.size());
  for (auto& [word, recs] : by_word) {
    std::sort(recs.begin(), recs.end(),
              [](const EmbeddingRecord* a, const EmbeddingRecord* b) { return a->context_id < b->context_id; });
    SiblingCohort cohort;
    cohort.word = word;
    for (const auto* rec : recs) {
      cohort.context_ids.push_back(rec->context_id);
      cohort.embeddings.push_back(rec->vector);
    }
    cohort.frequency = freq.find(word);
    cohort.sense_count = senses.find(word);
    cohorts.push_back(std::move(cohort));
  }
  return cohorts;
}

VariationReport cohort_variation(const SiblingCohort& cohort, double tol) {
  return variation_report(cohort.embeddings, tol);
}

}  // namespace embedgeo
