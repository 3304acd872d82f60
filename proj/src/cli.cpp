#include "rankfit/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "rankfit/error.hpp"
#include "rankfit/parallel.hpp"
#include "rankfit/synth.hpp"

namespace rankfit::cli {

namespace {

unsigned resolve_threads(unsigned threads) {
  return threads == 0 ? default_thread_count() : threads;
}

// Counts text inputs: files are counted (possibly concurrently) without the
// min_count filter, merged with standard input when requested, and
// filtered once at the end.
FrequencyCounts count_inputs(const std::vector<std::string>& inputs,
                             const TokenizerConfig& tokenizer,
                             unsigned threads, std::istream& in) {
  TokenizerConfig raw = tokenizer;
  raw.min_count = 1;
  std::vector<std::string> files;
  bool use_stdin = inputs.empty();
  for (const auto& p : inputs) {
    if (p == "-") {
      use_stdin = true;
    } else {
      files.push_back(p);
    }
  }
  FrequencyCounts counts = count_files(files, raw, resolve_threads(threads));
  if (use_stdin) {
    try {
      counts = merge_counts(counts, count_words(in, raw));
    } catch (const DecodeError& e) {
      throw DecodeError("<stdin>: invalid UTF-8 sequence", e.byte_offset());
    }
  }
  if (tokenizer.min_count < 1) {
    throw std::invalid_argument("min_count must be at least 1");
  }
  apply_min_count(counts, tokenizer.min_count);
  return counts;
}

RankFrequencyTable read_table(const std::string& path, std::istream& in) {
  if (path == "-") return read_table_tsv(in);
  std::ifstream file(path);
  if (!file) throw DataError(path + ": cannot open file");
  try {
    return read_table_tsv(file);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string corpus_id_for(const FitOptions& options) {
  if (!options.corpus_id.empty()) return options.corpus_id;
  if (options.inputs.size() == 1 && options.inputs[0] != "-") {
    return std::filesystem::path(options.inputs[0]).stem().string();
  }
  return "stdin";
}

ModelParams synth_model(const SynthOptions& o, std::uint64_t& max_rank) {
  max_rank = o.r_max;
  switch (o.family) {
    case ModelFamily::kTwoParam: {
      const double r_exp = o.r_exp ? *o.r_exp
                                   : self_consistent_r_exp(o.s, o.t, o.r_max,
                                                           100, !o.sample);
      return TwoParamModel{o.s, o.t, o.r_max, r_exp};
    }
    case ModelFamily::kPowerLaw:
      return PowerLaw{o.alpha, o.log_c};
    case ModelFamily::kZipfMandelbrot:
      return ZipfMandelbrot{o.alpha, o.beta, o.log_c};
    case ModelFamily::kLi:
      return Li{o.alpha, o.beta, o.log_c, o.r_max};
    case ModelFamily::kDing3:
      return Ding3{o.alpha, o.beta, o.gamma, o.log_c};
  }
  throw std::invalid_argument("unknown model family");
}

std::string describe(const ModelParams& params) {
  const Json j = params_to_json(params);
  std::string out(to_string(family_of(params)));
  for (const auto& [key, value] : j.items()) {
    out += fmt::format(" {}={}", key, value.dump());
  }
  return out;
}

}  // namespace

void cmd_rank(const RankOptions& options, std::istream& in,
              std::ostream& out) {
  const FrequencyCounts counts =
      count_inputs(options.inputs, options.tokenizer, options.threads, in);
  const RankFrequencyTable table = build_table(counts);
  const CorpusStats stats = compute_stats(table, options.tie_rank);
  out << fmt::format("# tokens={} vocab={} r_exp={:.6f}\n", stats.total_tokens,
                     stats.vocab_size, stats.r_exp);
  write_table_tsv(out, table);
}

FitReport cmd_fit(const FitOptions& options, std::istream& in) {
  if (options.models.empty()) {
    throw std::invalid_argument("at least one model is required");
  }
  validate_config(options.config);
  RankFrequencyTable table;
  FitReport report;
  if (options.from_text) {
    table = build_table(count_inputs(options.inputs, options.tokenizer,
                                     options.config.threads, in));
    report.tokenizer = options.tokenizer;
  } else {
    if (options.inputs.size() > 1) {
      throw std::invalid_argument("fit takes a single rank table");
    }
    table = read_table(options.inputs.empty() ? "-" : options.inputs[0], in);
  }

  report.corpus_id = corpus_id_for(options);
  report.stats = compute_stats(table, options.tie_rank);
  if (options.r_exp) {
    if (!(*options.r_exp > 0.0)) {
      throw std::invalid_argument("--r-exp must be positive");
    }
    report.stats.r_exp = *options.r_exp;
    report.r_exp_override = options.r_exp;
  }
  if (options.r_max) {
    if (*options.r_max < report.stats.r_max) {
      throw std::invalid_argument("--r-max is below the table's largest rank");
    }
    report.stats.r_max = *options.r_max;
    report.r_max_override = options.r_max;
  }
  report.config = options.config;
  report.tie_rank = options.tie_rank;
  for (ModelFamily family : options.models) {
    report.per_model.push_back(
        fit_model(table, report.stats, family, options.config));
  }
  return report;
}

void cmd_plotdata(const std::string& table_path,
                  const std::string& report_path, std::istream& in,
                  std::ostream& out, std::ostream& err) {
  if (table_path == "-" && report_path == "-") {
    throw std::invalid_argument("only one input can come from stdin");
  }
  const RankFrequencyTable table = read_table(table_path, in);
  Json j;
  try {
    if (report_path == "-") {
      in >> j;
    } else {
      std::ifstream file(report_path);
      if (!file) throw DataError(report_path + ": cannot open file");
      file >> j;
    }
  } catch (const Json::exception& e) {
    throw DataError(report_path + ": " + e.what());
  }
  const FitReport report = report_from_json(j);
  std::vector<std::string> warnings;
  write_plot_data(out, table, report, warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

void cmd_synth(const SynthOptions& options, std::ostream& out) {
  SynthSpec spec;
  spec.model = synth_model(options, spec.max_rank);
  const SynthOutput output = options.output.value_or(
      options.sample ? SynthOutput::kTokens : SynthOutput::kTable);

  if (options.sample) {
    spec.mode = SampleMode{options.tokens, options.seed};
    if (output == SynthOutput::kTokens) {
      write_token_stream(out, sample_ranks(spec));
      return;
    }
    const RankFrequencyTable table = build_table(synth_sample(spec));
    out << "# synth sample seed=" << options.seed
        << " tokens=" << options.tokens << ' ' << describe(spec.model) << '\n';
    write_table_tsv(out, table);
    return;
  }

  if (output == SynthOutput::kTokens) {
    throw std::invalid_argument("token output needs --mode sample");
  }
  if (options.grid_points == 0) {
    spec.grid = AllRanks{};
  } else {
    spec.grid = LogSpacedRanks{options.grid_points};
  }
  const RankFrequencyTable table = synth_exact(spec);
  out << "# synth exact " << describe(spec.model) << '\n';
  write_table_tsv(out, table);
}

void cmd_moments(const MomentsOptions& options, std::ostream& out) {
  const GBPParams g{options.alpha, options.beta, 1.0, options.q};
  const std::optional<double> m = gbp_raw_moment(g, options.k);
  if (options.json) {
    Json j = {{"alpha", options.alpha},
                        {"beta", options.beta},
                        {"q", options.q},
                        {"k", options.k},
                        {"defined", m.has_value()},
                        {"moment", nullptr}};
    if (m) j["moment"] = *m;
    out << j.dump() << '\n';
  } else if (m) {
    out << fmt::format("{:.12g}\n", *m);
  } else {
    out << "undefined\n";
  }
}

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-frequency tables and rank-frequency law fitting"};
  app.name(args.empty() ? "rankfit" : args[0]);
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);


  // Enumerations are taken as strings and converted after parsing.
  std::string rank_pattern = "whitespace", fit_pattern = "whitespace";
  std::string rank_tie = "shared", fit_tie = "shared";
  const auto add_tokenizer = [&](CLI::App* cmd, TokenizerConfig& t,
                                 std::string& pattern) {
    cmd->add_flag("--lowercase", t.lowercase, "Fold case before counting");
    cmd->add_option("--min-count", t.min_count,
                    "Drop words seen fewer times")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--pattern", pattern, "whitespace or unicode-word")
        ->check(CLI::IsMember({"whitespace", "unicode-word"}));
  };

  // rank
  RankOptions rank_opts;
  auto* rank = app.add_subcommand("rank", "Build a rank-frequency table");
  rank->add_option("inputs", rank_opts.inputs, "Text files ('-' for stdin)");
  add_tokenizer(rank, rank_opts.tokenizer, rank_pattern);
  rank->add_option("--tie-rank", rank_tie, "r_exp tie handling")
      ->check(CLI::IsMember({"shared", "sequential"}));
  rank->add_option("--threads", rank_opts.threads, "Worker threads");

  // fit
  FitOptions fit_opts;
  std::vector<std::string> model_names;
  auto* fit = app.add_subcommand("fit", "Fit rank-frequency laws");
  fit->add_option("inputs", fit_opts.inputs,
                  "Rank table TSV ('-' for stdin), or text with --from-text");
  fit->add_flag("--from-text", fit_opts.from_text,
                "Treat inputs as text corpora");
  add_tokenizer(fit, fit_opts.tokenizer, fit_pattern);
  fit->add_option("--model", model_names,
                  "two-param, power-law, zipf-mandelbrot, li, ding3 or all")
      ->allow_extra_args(false);
  fit->add_option("--corpus-id", fit_opts.corpus_id, "Identifier in report");
  fit->add_option("--r-exp", fit_opts.r_exp, "Override the table's r_exp");
  fit->add_option("--r-max", fit_opts.r_max, "Override the table's r_max");
  fit->add_option("--t-min", fit_opts.config.t_min);
  fit->add_option("--t-max", fit_opts.config.t_max);
  fit->add_option("--offset-min", fit_opts.config.offset_min);
  fit->add_option("--offset-max", fit_opts.config.offset_max);
  fit->add_option("--grid-points", fit_opts.config.grid_points);
  fit->add_option("--tol", fit_opts.config.refine_tolerance);
  fit->add_option("--threads", fit_opts.config.threads);
  fit->add_option("--tie-rank", fit_tie, "r_exp tie handling")
      ->check(CLI::IsMember({"shared", "sequential"}));

  // plotdata
  std::string plot_table, plot_report;
  auto* plot = app.add_subcommand("plotdata", "Empirical vs fitted curves");
  plot->add_option("--table", plot_table, "Rank table TSV")->required();
  plot->add_option("--report", plot_report, "Fit report JSON")->required();

  // synth
  SynthOptions synth_opts;
  std::string synth_mode = "exact", synth_family = "two-param", grid = "log";
  std::string synth_output;
  std::optional<double> r_exp;
  auto* synth = app.add_subcommand("synth", "Synthetic tables and tokens");
  synth->add_option("--mode", synth_mode)
      ->check(CLI::IsMember({"exact", "sample"}));
  synth->add_option("--model", synth_family)
      ->check(CLI::IsMember({"two-param", "power-law", "zipf-mandelbrot", "li",
                             "ding3"}));
  synth->add_option("--s", synth_opts.s);
  synth->add_option("--t", synth_opts.t);
  synth->add_option("--r-max", synth_opts.r_max, "Largest rank")
      ->check(CLI::PositiveNumber);
  synth->add_option("--r-exp", r_exp, "Default: self-consistent value");
  synth->add_option("--alpha", synth_opts.alpha);
  synth->add_option("--beta", synth_opts.beta,
                    "Li/Ding exponent, Zipf-Mandelbrot offset");
  synth->add_option("--gamma", synth_opts.gamma);
  synth->add_option("--log-c", synth_opts.log_c);
  synth->add_option("--grid", grid)->check(CLI::IsMember({"log", "all"}));
  synth->add_option("--grid-points", synth_opts.grid_points);
  synth->add_option("--tokens", synth_opts.tokens);
  synth->add_option("--seed", synth_opts.seed);
  synth->add_option("--output", synth_output)
      ->check(CLI::IsMember({"table", "tokens"}));

  // moments
  MomentsOptions mom_opts;
  std::optional<double> mom_s, mom_t, mom_r_exp;
  auto* moments = app.add_subcommand("moments", "Beta prime moments (p = 1)");
  moments->add_option("--alpha", mom_opts.alpha);
  moments->add_option("--beta", mom_opts.beta);
  moments->add_option("--q", mom_opts.q);
  moments->add_option("--k", mom_opts.k)->check(CLI::PositiveNumber);
  moments->add_option("--s", mom_s, "With --t and --r-exp: alpha=s, "
                                    "beta=1+s*t, q=t*r_exp");
  moments->add_option("--t", mom_t);
  moments->add_option("--r-exp", mom_r_exp);
  moments->add_flag("--json", mom_opts.json);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    rank_opts.tokenizer.token_pattern = parse_token_pattern(rank_pattern);
    rank_opts.tie_rank = parse_tie_rank(rank_tie);
    fit_opts.tokenizer.token_pattern = parse_token_pattern(fit_pattern);
    fit_opts.tie_rank = parse_tie_rank(fit_tie);
    if (rank->parsed()) {
      cmd_rank(rank_opts, in, out);
    } else if (fit->parsed()) {
      if (!model_names.empty()) fit_opts.models.clear();
      for (const auto& name : model_names) {
        if (name == "all") {
          fit_opts.models = {ModelFamily::kTwoParam, ModelFamily::kPowerLaw,
                             ModelFamily::kZipfMandelbrot, ModelFamily::kLi,
                             ModelFamily::kDing3};
          break;
        }
        fit_opts.models.push_back(parse_model_family(name));
      }
      out << report_to_json(cmd_fit(fit_opts, in)).dump(2) << '\n';
    } else if (plot->parsed()) {
      cmd_plotdata(plot_table, plot_report, in, out, err);
    } else if (synth->parsed()) {
      synth_opts.sample = synth_mode == "sample";
      synth_opts.family = parse_model_family(synth_family);
      synth_opts.r_exp = r_exp;
      if (grid == "all") synth_opts.grid_points = 0;
      if (synth_output == "table") synth_opts.output = SynthOutput::kTable;
      if (synth_output == "tokens") synth_opts.output = SynthOutput::kTokens;
      cmd_synth(synth_opts, out);
    } else if (moments->parsed()) {
      if (mom_s || mom_t || mom_r_exp) {
        if (!(mom_s && mom_t && mom_r_exp)) {
          throw std::invalid_argument("--s, --t and --r-exp go together");
        }
        const GBPParams g = gbp_from_two_param(*mom_s, *mom_t, *mom_r_exp);
        mom_opts.alpha = g.alpha;
        mom_opts.beta = g.beta;
        mom_opts.q = g.q;
      }
      cmd_moments(mom_opts, out);
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  out.flush();
  return kExitOk;
}

}  // namespace rankfit::cli
