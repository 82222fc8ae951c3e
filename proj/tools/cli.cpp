#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "embedgeo/analysis.hpp"
#include "embedgeo/data.hpp"
#include "embedgeo/error.hpp"
#include "embedgeo/report.hpp"
#include "embedgeo/synth.hpp"
#include "embedgeo/theory.hpp"

namespace embedgeo::cli {

namespace {

namespace fs = std::filesystem;
using report::Json;

struct Common {
  std::string format = "text";
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::size_t n_bins = 10;
};

bool json_output(const Common& c) { return c.format == "json"; }

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

// Rows of whitespace-, comma- or tab-separated numbers; '#' starts a comment
// line.
std::vector<Vector> read_plain_points(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string(), path.string(), 0);
  std::vector<Vector> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == ',')) ++pos;
      if (pos >= line.size()) break;
      double value = 0.0;
      const auto res = std::from_chars(line.data() + pos, line.data() + line.size(), value);
      if (res.ec != std::errc() ||
          (res.ptr != line.data() + line.size() && *res.ptr != ' ' && *res.ptr != '\t' && *res.ptr != ',')) {
        throw Error(ErrorCode::MalformedRow, "expected numbers", path.string(), line_no);
      }
      if (!std::isfinite(value)) throw Error(ErrorCode::NonFiniteValue, "non-finite coordinate", path.string(), line_no);
      row.push_back(value);
      pos = static_cast<std::size_t>(res.ptr - line.data());
    }
    if (!points.empty() && static_cast<std::size_t>(points.front().size()) != row.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  fmt::format("row has {} values, expected {}", row.size(), points.front().size()),
                  path.string(), line_no);
    }
    points.push_back(Eigen::Map<const Vector>(row.data(), static_cast<Eigen::Index>(row.size())));
  }
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "no points", path.string(), 0);
  return points;
}

bool is_embedding_dump(const fs::path& path) {
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  return first.rfind("#embdump", 0) == 0;
}

SenseTable optional_senses(const std::string& path) {
  return path.empty() ? SenseTable{} : load_sense_table(path);
}

void print_study(std::ostream& out, const Common& c, const StudyReport& study) {
  if (json_output(c)) {
    emit(out, report::to_json(study));
  } else {
    out << report::render_study(study);
  }
}

std::string format_value(double v) { return fmt::format("{:.6g}", v); }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometry and statistics of contextual word embeddings", "embedgeo"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", "embedgeo 1.0.0");

  Common common;
  app.add_option("--format", common.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--tol", common.tol, "Relative tolerance of the minimum enclosing ball")
      ->check(CLI::Range(1e-15, 1e-3));
  app.add_option("--seed", common.seed, "Random seed");
  app.add_option("--n-bins", common.n_bins, "Number of equal-count frequency bins")->check(CLI::PositiveNumber);

  // meb
  auto* meb = app.add_subcommand("meb", "Minimum enclosing ball of one point set");
  std::string meb_points;
  std::string meb_word;
  meb->add_option("--points", meb_points, "Embedding dump, or rows of numbers")->required()->check(CLI::ExistingFile);
  meb->add_option("--word", meb_word, "Only this word's records (embedding dumps only)");

  // cohort-stats
  auto* cohort_stats = app.add_subcommand("cohort-stats", "Variation metrics of every sibling cohort");
  std::string cs_dump;
  cohort_stats->add_option("--dump", cs_dump, "Embedding dump")->required()->check(CLI::ExistingFile);

  // radius-study
  auto* radius = app.add_subcommand("radius-study", "Correlate cohort variation with frequency");
  std::string rs_dump, rs_freq, rs_senses, rs_pairs, rs_pair_dump;
  radius->add_option("--dump", rs_dump, "Embedding dump of the cohorts")->required()->check(CLI::ExistingFile);
  radius->add_option("--freq", rs_freq, "Frequency table")->required()->check(CLI::ExistingFile);
  radius->add_option("--senses", rs_senses, "Sense-count table")->check(CLI::ExistingFile);
  radius->add_option("--pairs", rs_pairs, "Pairs for the cosine-on-radius fit")->check(CLI::ExistingFile);
  radius->add_option("--pair-dump", rs_pair_dump, "Embedding dump of the pair contexts (default: --dump)")
      ->check(CLI::ExistingFile);

  // wic-regress / scws-regress
  std::string rg_pairs, rg_dump, rg_freq, rg_senses;
  auto add_regress = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--pairs", rg_pairs, "Pair file")->required()->check(CLI::ExistingFile);
    sub->add_option("--dump", rg_dump, "Embedding dump of the pair contexts")->required()->check(CLI::ExistingFile);
    sub->add_option("--freq", rg_freq, "Frequency table")->required()->check(CLI::ExistingFile);
    sub->add_option("--senses", rg_senses, "Sense-count table")->required()->check(CLI::ExistingFile);
    return sub;
  };
  auto* wic = add_regress("wic-regress", "Cosine regressions on labelled same-lemma pairs");
  auto* scws = add_regress("scws-regress", "Cosine and rating regressions on rated pairs");

  // threshold-eval
  auto* threshold = app.add_subcommand("threshold-eval", "Tune a cosine threshold and bin agreement by frequency");
  std::string te_train, te_dev, te_dump, te_freq;
  threshold->add_option("--train", te_train, "Labelled training pairs")->required()->check(CLI::ExistingFile);
  threshold->add_option("--dev", te_dev, "Labelled evaluation pairs")->required()->check(CLI::ExistingFile);
  threshold->add_option("--dump", te_dump, "Embedding dump of the pair contexts")->required()->check(CLI::ExistingFile);
  threshold->add_option("--freq", te_freq, "Frequency table")->required()->check(CLI::ExistingFile);

  // residual-study
  auto* residual = app.add_subcommand("residual-study", "Correlate held-out cosine residuals with frequency");
  std::string rr_pairs, rr_dump, rr_freq;
  std::size_t rr_train_n = 1000;
  residual->add_option("--pairs", rr_pairs, "Rated pairs")->required()->check(CLI::ExistingFile);
  residual->add_option("--dump", rr_dump, "Embedding dump of the pair contexts")->required()->check(CLI::ExistingFile);
  residual->add_option("--freq", rr_freq, "Frequency table")->required()->check(CLI::ExistingFile);
  residual->add_option("--train-n", rr_train_n, "Training pairs")->check(CLI::PositiveNumber);

  // theory
  auto* theory_cmd = app.add_subcommand("theory", "Closed forms of the tangent-ball model");
  theory_cmd->require_subcommand(1);
  theory::TangentBallConfig tb;
  auto* arc = theory_cmd->add_subcommand("arc", "Arc of unit directions spanned by a ball");
  arc->add_option("--center-norm", tb.center_norm, "Distance of the ball center from the origin");
  arc->add_option("--radius", tb.radius, "Ball radius");
  auto* fraction = theory_cmd->add_subcommand("fraction", "Monte Carlo fraction of the ball similar to its tangent");
  std::size_t samples = 1000000;
  fraction->add_option("--center-norm", tb.center_norm, "Distance of the ball center from the origin");
  fraction->add_option("--radius", tb.radius, "Ball radius");
  fraction->add_option("--threshold", tb.threshold, "Cosine threshold");
  fraction->add_option("--samples", samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  auto* vratio = theory_cmd->add_subcommand("volume-ratio", "Volume growth of an n-ball under a radius ratio");
  int vr_dim = 768;
  double vr_ratio = 1.01;
  vratio->add_option("--dim", vr_dim, "Dimension")->check(CLI::PositiveNumber);
  vratio->add_option("--ratio", vr_ratio, "New radius over old radius")->check(CLI::PositiveNumber);

  // count-freq
  auto* count = app.add_subcommand("count-freq", "Count token frequencies in plain-text corpora");
  std::vector<std::string> corpus;
  std::string count_out;
  bool ignore_case = false;
  count->add_option("--corpus", corpus, "Corpus files")->required()->check(CLI::ExistingFile);
  count->add_option("--out", count_out, "Write the table here instead of standard output");
  count->add_flag("--ignore-case", ignore_case, "Fold ASCII letters to lower case");

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset with planted effects");
  SynthConfig sc;
  std::string synth_dir;
  std::string pair_kind = "none";
  synth->add_option("--out-dir", synth_dir, "Output directory")->required();
  synth->add_option("--words", sc.n_words, "Number of words")->check(CLI::PositiveNumber);
  synth->add_option("--contexts", sc.contexts_per_word, "Contexts per word")->check(CLI::PositiveNumber);
  synth->add_option("--dim", sc.dim, "Embedding dimension")->check(CLI::PositiveNumber);
  synth->add_option("--freq-min", sc.freq_min, "Smallest frequency")->check(CLI::PositiveNumber);
  synth->add_option("--freq-max", sc.freq_max, "Largest frequency")->check(CLI::PositiveNumber);
  synth->add_option("--radius-slope", sc.radius_slope, "Radius per log2 frequency unit");
  synth->add_option("--radius-intercept", sc.radius_intercept, "Radius at frequency 1");
  synth->add_option("--noise", sc.noise_sigma, "Standard deviation of the radius noise");
  synth->add_option("--center-norm", sc.center_norm, "Distance of every cohort center from the origin");
  synth->add_option("--pair-kind", pair_kind, "Pairs to generate")->check(CLI::IsMember({"none", "wic", "scws"}));
  synth->add_option("--n-pairs", sc.n_pairs, "Number of pairs");
  synth->add_option("--cosine-freq-slope", sc.cosine_freq_slope, "Planted cosine per log2 frequency unit");
  synth->add_option("--cosine-noise", sc.cosine_noise_sigma, "Standard deviation of the cosine noise");
  synth->add_option("--cosine-rating-slope", sc.cosine_rating_slope, "Planted cosine per rating unit (scws)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (meb->parsed()) {
      std::vector<Vector> points;
      if (is_embedding_dump(meb_points)) {
        const auto dump = load_embedding_dump(meb_points);
        for (const auto& rec : dump.records()) {
          if (meb_word.empty() || rec.word == meb_word) points.push_back(rec.vector);
        }
        if (points.empty()) throw Error(ErrorCode::EmptyInput, "no records for word '" + meb_word + "'", meb_points, 0);
      } else {
        if (!meb_word.empty()) {
          err << "--word needs an embedding dump\n";
          return kExitUsage;
        }
        points = read_plain_points(meb_points);
      }
      const Ball ball = min_enclosing_ball(points, common.tol);
      if (json_output(common)) {
        emit(out, report::to_json(ball));
      } else {
        out << report::render_ball(ball);
      }
    } else if (cohort_stats->parsed()) {
      const auto dump = load_embedding_dump(cs_dump);
      const auto cohorts = assemble_cohorts(dump, {}, {});
      Json rows = Json::array();
      if (!json_output(common)) {
        out << "word\tn\tradius_meb\tavg_pairwise_dist\tmax_pairwise_dist\tvar_pairwise_dist\tavg_norm\thull_area_2d\n";
      }
      for (const auto& c : cohorts) {
        if (c.embeddings.size() < 2) {
          err << "skipping " << c.word << ": fewer than two contexts\n";
          continue;
        }
        const auto v = cohort_variation(c, common.tol);
        if (json_output(common)) {
          Json row = report::to_json(v);
          row["word"] = c.word;
          row["n"] = c.embeddings.size();
          rows.push_back(std::move(row));
        } else {
          out << fmt::format("{}\t{}\t{:.6g}\t{:.6g}\t{:.6g}\t{:.6g}\t{:.6g}\t{:.6g}\n", c.word, c.embeddings.size(),
                             v.radius_meb, v.avg_pairwise_dist, v.max_pairwise_dist, v.var_pairwise_dist,
                             v.avg_norm, v.hull_area_2d);
        }
      }
      if (json_output(common)) emit(out, rows);
    } else if (radius->parsed()) {
      const auto dump = load_embedding_dump(rs_dump);
      const auto freq = load_frequency_table(rs_freq);
      const auto senses = optional_senses(rs_senses);
      const auto cohorts = assemble_cohorts(dump, freq, senses);
      std::vector<PairExample> pairs;
      EmbeddingDump pair_dump;
      PairData pair_data;
      if (!rs_pairs.empty()) {
        pairs = load_pairs(rs_pairs);
        pair_data.pairs = &pairs;
        if (!rs_pair_dump.empty()) {
          pair_dump = load_embedding_dump(rs_pair_dump);
          pair_data.dump = &pair_dump;
        } else {
          pair_data.dump = &dump;
        }
      }
      const auto study = radius_frequency_study(cohorts, common.tol, pair_data);
      print_study(out, common, study.report);
    } else if (wic->parsed() || scws->parsed()) {
      const auto pairs = load_pairs(rg_pairs);
      const auto dump = load_embedding_dump(rg_dump);
      const auto freq = load_frequency_table(rg_freq);
      const auto senses = load_sense_table(rg_senses);
      const auto study = wic->parsed() ? wic_regressions(pairs, dump, freq, senses)
                                       : scws_regressions(pairs, dump, freq, senses);
      print_study(out, common, study);
    } else if (threshold->parsed()) {
      const auto train = load_pairs(te_train);
      const auto dev = load_pairs(te_dev);
      const auto dump = load_embedding_dump(te_dump);
      const auto freq = load_frequency_table(te_freq);
      const auto tuned = threshold_tune(train, dump);
      const double dev_accuracy = threshold_accuracy(dev, dump, tuned.threshold);
      const auto agreement = binned_agreement(dev, dump, freq, tuned.threshold, common.n_bins);
      if (json_output(common)) {
        emit(out, Json{{"threshold", report::number(tuned.threshold)},
                       {"train_accuracy", report::number(tuned.train_accuracy)},
                       {"n_train", tuned.n},
                       {"dev_accuracy", report::number(dev_accuracy)},
                       {"n_dev", dev.size()},
                       {"n_binned", agreement.n_used},
                       {"n_excluded", agreement.n_excluded},
                       {"bins", report::to_json(agreement.summary)}});
      } else {
        out << fmt::format("threshold        {}\ntrain_accuracy   {}\nn_train          {}\n",
                           format_value(tuned.threshold), format_value(tuned.train_accuracy), tuned.n);
        out << fmt::format("dev_accuracy     {}\nn_dev            {}\nn_binned         {}\nn_excluded       {}\n\n",
                           format_value(dev_accuracy), dev.size(), agreement.n_used, agreement.n_excluded);
        out << report::render_bins(agreement.summary);
      }
    } else if (residual->parsed()) {
      const auto pairs = load_pairs(rr_pairs);
      const auto dump = load_embedding_dump(rr_dump);
      const auto freq = load_frequency_table(rr_freq);
      const auto study = residual_study(pairs, dump, freq, rr_train_n, common.seed);
      if (json_output(common)) {
        emit(out, Json{{"pearson_r", report::number(study.correlation.r)},
                       {"p_value", report::number(study.correlation.p_value)},
                       {"n_train", study.n_train},
                       {"n_eval", study.n_eval},
                       {"n_excluded", study.n_excluded},
                       {"seed", common.seed},
                       {"train_fit", report::to_json(study.train_fit)}});
      } else {
        out << fmt::format("pearson_r   {}\np_value     {}\nn_train     {}\nn_eval      {}\nn_excluded  {}\n\n",
                           format_value(study.correlation.r), format_value(study.correlation.p_value),
                           study.n_train, study.n_eval, study.n_excluded);
        out << report::render_fit("train: cosine ~ rating", study.train_fit);
      }
    } else if (arc->parsed()) {
      const auto a = theory::tangent_arc_length(tb);
      if (json_output(common)) {
        emit(out, Json{{"theta", a.theta}, {"arc_length", a.arc_length}});
      } else {
        out << fmt::format("theta       {}\narc_length  {}\n", format_value(a.theta), format_value(a.arc_length));
      }
    } else if (fraction->parsed()) {
      const double p = theory::similar_fraction_estimate(tb, samples, common.seed);
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
      if (json_output(common)) {
        emit(out, Json{{"fraction", p}, {"std_error", se}, {"samples", samples}, {"seed", common.seed}});
      } else {
        out << fmt::format("fraction   {}\nstd_error  {}\n", format_value(p), format_value(se));
      }
    } else if (vratio->parsed()) {
      const double v = theory::volume_ratio(vr_dim, vr_ratio, 1.0);
      if (json_output(common)) {
        emit(out, Json{{"dim", vr_dim}, {"ratio", vr_ratio}, {"volume_ratio", report::number(v)}});
      } else {
        out << fmt::format("volume_ratio  {}\n", format_value(v));
      }
    } else if (count->parsed()) {
      std::vector<fs::path> paths(corpus.begin(), corpus.end());
      const auto table = count_corpus_frequencies(paths, !ignore_case);
      if (!count_out.empty()) {
        save_count_table(table, count_out);
        out << fmt::format("{} types written to {}\n", table.size(), count_out);
      } else if (json_output(common)) {
        Json counts = Json::object();
        for (const auto& [w, c] : table.entries()) counts[w] = c;
        emit(out, counts);
      } else {
        write_count_table(table, out);
      }
    } else if (synth->parsed()) {
      sc.seed = common.seed;
      sc.pair_kind = pair_kind == "wic"    ? PairKind::WordInContext
                     : pair_kind == "scws" ? PairKind::RatedSimilarity
                                           : PairKind::None;
      const auto data = synth_generate(sc);
      const fs::path dir(synth_dir);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw Error(ErrorCode::UnreadableFile, "cannot create " + dir.string() + ": " + ec.message());
      save_embedding_dump(data.cohort_dump, dir / "cohorts.embdump");
      save_count_table(data.freq, dir / "freq.tsv");
      save_count_table(data.senses, dir / "senses.tsv");
      std::vector<std::string> written = {"cohorts.embdump", "freq.tsv", "senses.tsv"};
      if (sc.pair_kind != PairKind::None) {
        save_embedding_dump(data.pair_dump, dir / "pairs.embdump");
        save_pairs(data.pairs, dir / "pairs.tsv");
        written.emplace_back("pairs.embdump");
        written.emplace_back("pairs.tsv");
      }
      if (json_output(common)) {
        emit(out, Json{{"out_dir", dir.string()}, {"files", written}, {"seed", sc.seed}});
      } else {
        for (const auto& f : written) out << (dir / f).string() << '\n';
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace embedgeo::cli
