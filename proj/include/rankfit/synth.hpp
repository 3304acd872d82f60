#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "rankfit/corpus_ingest.hpp"
#include "rankfit/fitter.hpp"
#include "rankfit/models.hpp"
#include "rankfit/rankfreq.hpp"

namespace rankfit {

// SplitMix64 (Steele, Lea, Flood 2014). split() derives an independent
// child stream, which keeps chunked parallel sampling reproducible
// regardless of thread count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  SplitMix64 split() noexcept { return SplitMix64(next() ^ 0x6A09E667F3BCC909ULL); }

 private:
  std::uint64_t state_;
};

// Walker/Vose alias table over indices 0..n-1 with probabilities
// proportional to the given non-negative weights.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights);

  std::size_t sample(SplitMix64& rng) const noexcept;
  std::size_t size() const noexcept { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

struct AllRanks {};
struct LogSpacedRanks {
  unsigned points = 64;
};
using RankGrid = std::variant<AllRanks, LogSpacedRanks>;

struct ExactMode {};
struct SampleMode {
  std::uint64_t total_tokens = 0;
  std::uint64_t seed = 0;
};
using SynthMode = std::variant<ExactMode, SampleMode>;

struct SynthSpec {
  ModelParams model;
  RankGrid grid = LogSpacedRanks{};
  SynthMode mode = ExactMode{};
  // Largest rank generated. Two-param and Li take it from the model when
  // left at 0; the other families require it.
  std::uint64_t max_rank = 0;
};

// Resolved largest rank of the spec. Throws std::invalid_argument when the
// spec and model disagree or no rank domain is given.
std::uint64_t rank_domain(const SynthSpec& spec);

// Integer ranks on the grid, strictly increasing from 1 to r_max. The
// log-spaced grid has exactly min(points, r_max) entries.
std::vector<std::uint64_t> rank_grid(const RankGrid& grid,
                                     std::uint64_t r_max);

// Unrounded model frequencies on the grid.
RankCurve synth_curve(const SynthSpec& spec);

// Frequencies rounded to the nearest integer (minimum 1), multiplicity 1
// per grid rank. A rank whose rounded frequency exceeds the last kept one is
// dropped; a run of equal rounded frequencies becomes one tie group at the
// run's last rank.
RankFrequencyTable synth_exact(const SynthSpec& spec);

// Fixpoint r_exp <- compute_r_exp(all-ranks table of the two-param law).
// `rounded` selects the integer table of synth_exact; otherwise the mean
// rank of the real-valued curve is used. Stops at `max_iterations` or when
// the relative change drops below 1e-12.
double self_consistent_r_exp(double s, double t, std::uint64_t r_max,
                             unsigned max_iterations = 100,
                             bool rounded = true);

// total_tokens i.i.d. ranks from p(r) proportional to f(r) on 1..r_max, in
// draw order.
std::vector<std::uint32_t> sample_ranks(const SynthSpec& spec);

// Counts of sample_ranks keyed by synthetic word ids "w<rank>".
FrequencyCounts synth_sample(const SynthSpec& spec);

// One "w<rank>" per line.
void write_token_stream(std::ostream& out,
                        std::span<const std::uint32_t> ranks);

}  // namespace rankfit
