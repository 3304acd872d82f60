#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rankfit/corpus_ingest.hpp"

namespace rankfit {

// One tie group: `multiplicity` distinct words share `frequency`, and all of
// them carry `rank`, the position of the last word of the group in
// descending-frequency order.
struct RankPoint {
  std::uint64_t rank = 0;
  std::uint64_t frequency = 0;
  std::uint64_t multiplicity = 0;

  friend bool operator==(const RankPoint&, const RankPoint&) = default;
};

// Points are strictly increasing in rank and strictly decreasing in
// frequency. Tables built from counts are dense (every rank equals the
// cumulative multiplicity); synthetic tables on a sparse rank grid are not.
struct RankFrequencyTable {
  std::vector<RankPoint> points;
  std::uint64_t total_tokens = 0;

  friend bool operator==(const RankFrequencyTable&,
                         const RankFrequencyTable&) = default;
};

struct CorpusStats {
  std::uint64_t r_max = 0;
  double r_exp = 0.0;
  std::uint64_t vocab_size = 0;
  std::uint64_t total_tokens = 0;
};

// How a tie group contributes to the r_exp sum. kShared gives each word the
// group's (maximum) rank; kSequential gives the words the consecutive ranks
// rank-m+1 .. rank.
enum class TieRank { kShared, kSequential };

std::string_view to_string(TieRank mode);
TieRank parse_tie_rank(std::string_view name);

// Throws DataError("empty vocabulary") on empty counts.
RankFrequencyTable build_table(const FrequencyCounts& counts);

// Words in descending frequency, ties broken lexicographically.
std::vector<std::pair<std::string, std::uint64_t>> ranked_words(
    const FrequencyCounts& counts);

// Throws DataError describing the first violated structural invariant.
void validate_table(const RankFrequencyTable& table);
bool is_dense(const RankFrequencyTable& table);

double compute_r_exp(const RankFrequencyTable& table,
                     TieRank mode = TieRank::kShared);
std::uint64_t compute_r_max(const RankFrequencyTable& table);
CorpusStats compute_stats(const RankFrequencyTable& table,
                          TieRank mode = TieRank::kShared);

// Rank-table TSV: header `rank\tfrequency\tmultiplicity`, one row per point,
// LF endings. Reading skips blank lines and lines starting with '#'.
void write_table_tsv(std::ostream& out, const RankFrequencyTable& table);
RankFrequencyTable read_table_tsv(std::istream& in);

}  // namespace rankfit
