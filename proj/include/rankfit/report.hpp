#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankfit/corpus_ingest.hpp"
#include "rankfit/fitter.hpp"
#include "rankfit/rankfreq.hpp"

namespace rankfit {

inline constexpr const char* kToolVersion = "0.1.0";

// Insertion-ordered so reports list fields in a fixed, readable order.
using Json = nlohmann::ordered_json;

struct FitReport {
  std::string corpus_id;
  CorpusStats stats;
  std::vector<FitResult> per_model;
  FitConfig config;
  TieRank tie_rank = TieRank::kShared;
  // Data constants supplied on the command line instead of being computed
  // from the table (e.g. for sparse synthetic grids).
  std::optional<double> r_exp_override;
  std::optional<std::uint64_t> r_max_override;
  // Present when the report was produced straight from text.
  std::optional<TokenizerConfig> tokenizer;
  std::string tool_version = kToolVersion;
};

// x rounded to 6 significant digits (exactly representable values survive).
double round_significant(double x, int digits = 6);

Json params_to_json(const ModelParams& params);
ModelParams params_from_json(ModelFamily family, const Json& j);

// Report JSON. Real numbers are rounded to 6 significant digits; integer
// statistics are written exactly.
Json report_to_json(const FitReport& report);
// Parses what report_to_json writes. Throws DataError on a malformed report.
FitReport report_from_json(const Json& j);

// Plot data: columns rank, empirical_f, then one fitted-f column per model
// (named by family), linear values. Cells where a model cannot be evaluated
// are left empty and reported through `warnings`.
void write_plot_data(std::ostream& out, const RankFrequencyTable& table,
                     const FitReport& report,
                     std::vector<std::string>& warnings);

}  // namespace rankfit
