#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rankfit/corpus_ingest.hpp"
#include "rankfit/fitter.hpp"
#include "rankfit/models.hpp"
#include "rankfit/rankfreq.hpp"
#include "rankfit/report.hpp"

namespace rankfit::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

// A path of "-" (or no inputs at all) means the `in` stream.
struct RankOptions {
  std::vector<std::string> inputs;
  TokenizerConfig tokenizer;
  TieRank tie_rank = TieRank::kShared;
  unsigned threads = 0;
};

// Writes `# tokens=<N> vocab=<V> r_exp=<value>` followed by the rank TSV.
void cmd_rank(const RankOptions& options, std::istream& in, std::ostream& out);

struct FitOptions {
  // Rank TSV by default; text corpora when from_text is set.
  std::vector<std::string> inputs;
  bool from_text = false;
  TokenizerConfig tokenizer;
  std::vector<ModelFamily> models{ModelFamily::kTwoParam};
  FitConfig config;
  TieRank tie_rank = TieRank::kShared;
  std::string corpus_id;
  // Replace the table-derived data constants.
  std::optional<double> r_exp;
  std::optional<std::uint64_t> r_max;
};

FitReport cmd_fit(const FitOptions& options, std::istream& in);

void cmd_plotdata(const std::string& table_path,
                  const std::string& report_path, std::istream& in,
                  std::ostream& out, std::ostream& err);

enum class SynthOutput { kTable, kTokens };

struct SynthOptions {
  bool sample = false;
  ModelFamily family = ModelFamily::kTwoParam;
  // Two-param
  double s = 0.15;
  double t = 4.8;
  std::uint64_t r_max = 10000;
  // Absent: self-consistent value.
  std::optional<double> r_exp;
  // Baselines (beta is the offset for Zipf-Mandelbrot)
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double log_c = 3.0;
  // Grid for exact mode; 0 points means every rank.
  unsigned grid_points = 64;
  std::uint64_t tokens = 1000000;
  std::uint64_t seed = 7;
  std::optional<SynthOutput> output;
};

void cmd_synth(const SynthOptions& options, std::ostream& out);

struct MomentsOptions {
  double alpha = 1.0;
  double beta = 1.0;
  double q = 1.0;
  unsigned k = 1;
  bool json = false;
};

void cmd_moments(const MomentsOptions& options, std::ostream& out);

// Full command line (args[0] is the program name). Returns the exit status.
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

}  // namespace rankfit::cli
