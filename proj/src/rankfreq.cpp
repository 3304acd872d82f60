#include "rankfit/rankfreq.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "rankfit/error.hpp"

namespace rankfit {

namespace {

using Wide = unsigned __int128;

constexpr std::string_view kTsvHeader = "rank\tfrequency\tmultiplicity";

std::uint64_t parse_field(std::string_view field, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || value == 0) {
    throw DataError("line " + std::to_string(line_no) +
                    ": expected a positive integer, got '" +
                    std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(TieRank mode) {
  return mode == TieRank::kShared ? "shared" : "sequential";
}

TieRank parse_tie_rank(std::string_view name) {
  if (name == "shared") return TieRank::kShared;
  if (name == "sequential") return TieRank::kSequential;
  throw std::invalid_argument("unknown tie-rank mode: " + std::string(name));
}

std::vector<std::pair<std::string, std::uint64_t>> ranked_words(
    const FrequencyCounts& counts) {
  std::vector<std::pair<std::string, std::uint64_t>> words(
      counts.entries.begin(), counts.entries.end());
  // entries are already in lexicographic order
  std::stable_sort(words.begin(), words.end(), [](const auto& a,
                                                  const auto& b) {
    return a.second > b.second;
  });
  return words;
}

RankFrequencyTable build_table(const FrequencyCounts& counts) {
  if (counts.empty()) throw DataError("empty vocabulary");

  std::vector<std::uint64_t> freqs;
  freqs.reserve(counts.entries.size());
  for (const auto& [word, f] : counts.entries) freqs.push_back(f);
  std::sort(freqs.begin(), freqs.end(), std::greater<>());

  RankFrequencyTable table;
  std::uint64_t position = 0;
  for (std::size_t i = 0; i < freqs.size();) {
    std::size_t j = i;
    while (j < freqs.size() && freqs[j] == freqs[i]) ++j;
    position += j - i;
    table.points.push_back({position, freqs[i], j - i});
    table.total_tokens += freqs[i] * (j - i);
    i = j;
  }
  return table;
}

void validate_table(const RankFrequencyTable& table) {
  if (table.points.empty()) throw DataError("empty vocabulary");
  std::uint64_t words = 0;
  Wide tokens = 0;
  for (std::size_t k = 0; k < table.points.size(); ++k) {
    const RankPoint& p = table.points[k];
    if (p.rank == 0 || p.frequency == 0 || p.multiplicity == 0) {
      throw DataError("point " + std::to_string(k) +
                      ": rank, frequency and multiplicity must be positive");
    }
    if (k > 0) {
      const RankPoint& prev = table.points[k - 1];
      if (p.rank <= prev.rank || p.frequency >= prev.frequency) {
        throw DataError("point " + std::to_string(k) +
                        ": ranks must increase and frequencies decrease");
      }
    }
    words += p.multiplicity;
    if (p.rank < words) {
      throw DataError("point " + std::to_string(k) +
                      ": rank is smaller than the number of words ranked");
    }
    tokens += static_cast<Wide>(p.frequency) * p.multiplicity;
  }
  if (tokens != table.total_tokens) {
    throw DataError("total_tokens does not match the sum of frequencies");
  }
}

bool is_dense(const RankFrequencyTable& table) {
  std::uint64_t words = 0;
  for (const auto& p : table.points) {
    words += p.multiplicity;
    if (p.rank != words) return false;
  }
  return true;
}

double compute_r_exp(const RankFrequencyTable& table, TieRank mode) {
  validate_table(table);
  Wide weighted = 0;
  Wide total = 0;
  for (const auto& p : table.points) {
    const Wide fm = static_cast<Wide>(p.frequency) * p.multiplicity;
    total += fm;
    if (mode == TieRank::kShared) {
      weighted += fm * p.rank;
    } else {
      // f * (sum of ranks rank-m+1 .. rank)
      const Wide m = p.multiplicity;
      weighted += static_cast<Wide>(p.frequency) *
                  (m * (2 * static_cast<Wide>(p.rank) - m + 1) / 2);
    }
  }
  return static_cast<double>(static_cast<long double>(weighted) /
                             static_cast<long double>(total));
}

std::uint64_t compute_r_max(const RankFrequencyTable& table) {
  validate_table(table);
  return table.points.back().rank;
}

CorpusStats compute_stats(const RankFrequencyTable& table, TieRank mode) {
  CorpusStats stats;
  stats.r_max = compute_r_max(table);
  stats.r_exp = compute_r_exp(table, mode);
  for (const auto& p : table.points) stats.vocab_size += p.multiplicity;
  stats.total_tokens = table.total_tokens;
  return stats;
}

void write_table_tsv(std::ostream& out, const RankFrequencyTable& table) {
  out << kTsvHeader << '\n';
  for (const auto& p : table.points) {
    out << p.rank << '\t' << p.frequency << '\t' << p.multiplicity << '\n';
  }
}

RankFrequencyTable read_table_tsv(std::istream& in) {
  RankFrequencyTable table;
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line != kTsvHeader) {
        throw DataError("line " + std::to_string(line_no) +
                        ": expected header '" + std::string(kTsvHeader) + "'");
      }
      seen_header = true;
      continue;
    }
    std::string_view rest = line;
    std::uint64_t fields[3];
    for (int f = 0; f < 3; ++f) {
      const auto tab = rest.find('\t');
      if ((f < 2) == (tab == std::string_view::npos)) {
        throw DataError("line " + std::to_string(line_no) +
                        ": expected three tab-separated fields");
      }
      fields[f] = parse_field(rest.substr(0, tab), line_no);
      if (tab != std::string_view::npos) rest.remove_prefix(tab + 1);
    }
    table.points.push_back({fields[0], fields[1], fields[2]});
    table.total_tokens += fields[1] * fields[2];
  }
  if (!seen_header) throw DataError("missing rank-table header");
  validate_table(table);
  return table;
}

}  // namespace rankfit
