#include "rankfit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rankfit/error.hpp"
#include "rankfit/parallel.hpp"

namespace rankfit {

namespace {

constexpr std::uint64_t kChunkSize = 1 << 16;
// Rounded frequencies above this cannot be summed safely.
constexpr double kMaxFrequency = 0x1.0p62;

double model_ln_f(double r, const ModelParams& params) {
  if (const auto* m = std::get_if<TwoParamModel>(&params)) {
    return two_param_log_f(r, *m);
  }
  return model_log10_f(r, params) * std::numbers::ln10;
}

std::uint64_t model_r_max(const ModelParams& params) {
  if (const auto* m = std::get_if<TwoParamModel>(&params)) return m->r_max;
  if (const auto* l = std::get_if<Li>(&params)) return l->r_max;
  return 0;
}

}  // namespace

AliasTable::AliasTable(std::span<const double> weights)
    : prob_(weights.size()), alias_(weights.size()) {
  const std::size_t n = weights.size();
  if (n == 0 || n > UINT32_MAX) {
    throw std::invalid_argument("alias table needs 1..2^32-1 weights");
  }
  long double total = 0.0L;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("alias weights must be finite and >= 0");
    }
    total += w;
  }
  if (!(total > 0.0L)) throw std::invalid_argument("alias weights sum to 0");

  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = static_cast<double>(weights[i] * n / total);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::uint32_t i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  // leftovers from rounding
  for (std::uint32_t i : small) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

std::size_t AliasTable::sample(SplitMix64& rng) const noexcept {
  const auto column = static_cast<std::size_t>(
      (static_cast<unsigned __int128>(rng.next()) * prob_.size()) >> 64);
  return rng.next_double() < prob_[column] ? column : alias_[column];
}

std::uint64_t rank_domain(const SynthSpec& spec) {
  const std::uint64_t from_model = model_r_max(spec.model);
  if (from_model != 0) {
    if (spec.max_rank != 0 && spec.max_rank != from_model) {
      throw std::invalid_argument(
          "max_rank disagrees with the model's r_max");
    }
    return from_model;
  }
  if (spec.max_rank == 0) {
    throw std::invalid_argument(
        std::string(to_string(family_of(spec.model))) +
        " synthesis needs an explicit max_rank");
  }
  return spec.max_rank;
}

std::vector<std::uint64_t> rank_grid(const RankGrid& grid,
                                     std::uint64_t r_max) {
  if (r_max == 0) throw std::invalid_argument("r_max must be positive");
  std::vector<std::uint64_t> ranks;
  const auto* log_grid = std::get_if<LogSpacedRanks>(&grid);
  if (log_grid == nullptr || log_grid->points >= r_max) {
    ranks.resize(r_max);
    for (std::uint64_t r = 0; r < r_max; ++r) ranks[r] = r + 1;
    return ranks;
  }
  const unsigned n = log_grid->points;
  if (n < 2) throw std::invalid_argument("log grid needs at least 2 points");
  const double log_max = std::log(static_cast<double>(r_max));
  std::uint64_t prev = 0;
  for (unsigned i = 0; i < n; ++i) {
    const double g = std::exp(log_max * i / (n - 1));
    std::uint64_t r = std::max<std::uint64_t>(prev + 1, std::llround(g));
    r = std::min<std::uint64_t>(r, r_max - (n - 1 - i));
    ranks.push_back(r);
    prev = r;
  }
  return ranks;
}

RankCurve synth_curve(const SynthSpec& spec) {
  const std::uint64_t r_max = rank_domain(spec);
  RankCurve curve;
  for (std::uint64_t r : rank_grid(spec.grid, r_max)) {
    const double rd = static_cast<double>(r);
    curve.ranks.push_back(rd);
    curve.frequencies.push_back(std::exp(model_ln_f(rd, spec.model)));
  }
  return curve;
}

RankFrequencyTable synth_exact(const SynthSpec& spec) {
  const RankCurve curve = synth_curve(spec);
  RankFrequencyTable table;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double f = std::round(curve.frequencies[i]);
    if (!(f <= kMaxFrequency)) {
      throw DomainError("synthetic frequency too large to represent");
    }
    const auto freq = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(f));
    const auto rank = static_cast<std::uint64_t>(curve.ranks[i]);
    if (!table.points.empty()) {
      RankPoint& last = table.points.back();
      if (freq > last.frequency) continue;
      if (freq == last.frequency) {
        last.rank = rank;
        ++last.multiplicity;
        table.total_tokens += freq;
        continue;
      }
    }
    table.points.push_back({rank, freq, 1});
    table.total_tokens += freq;
  }
  return table;
}

double self_consistent_r_exp(double s, double t, std::uint64_t r_max,
                             unsigned max_iterations, bool rounded) {
  SynthSpec spec;
  spec.grid = AllRanks{};
  double r_exp = std::max(1.0, static_cast<double>(r_max) / 10.0);
  for (unsigned iter = 0; iter < max_iterations; ++iter) {
    spec.model = TwoParamModel{s, t, r_max, r_exp};
    double next = 0.0;
    if (rounded) {
      next = compute_r_exp(synth_exact(spec));
    } else {
      const RankCurve curve = synth_curve(spec);
      long double num = 0.0L, den = 0.0L;
      for (std::size_t i = 0; i < curve.size(); ++i) {
        num += static_cast<long double>(curve.ranks[i]) * curve.frequencies[i];
        den += curve.frequencies[i];
      }
      next = static_cast<double>(num / den);
    }
    const bool converged = std::abs(next - r_exp) <= 1e-12 * r_exp;
    r_exp = next;
    if (converged) break;
  }
  return r_exp;
}

std::vector<std::uint32_t> sample_ranks(const SynthSpec& spec) {
  const auto* mode = std::get_if<SampleMode>(&spec.mode);
  if (mode == nullptr) throw std::invalid_argument("spec is not in sample mode");
  const std::uint64_t r_max = rank_domain(spec);
  if (mode->total_tokens == 0) return {};
  if (mode->total_tokens < r_max) {
    throw std::invalid_argument("total_tokens must be at least r_max");
  }
  if (r_max > UINT32_MAX) throw std::invalid_argument("r_max too large");

  std::vector<double> log_w(r_max);
  for (std::uint64_t r = 1; r <= r_max; ++r) {
    log_w[r - 1] = model_ln_f(static_cast<double>(r), spec.model);
  }
  const double top = *std::max_element(log_w.begin(), log_w.end());
  for (double& w : log_w) w = std::exp(w - top);
  const AliasTable table(log_w);

  const std::uint64_t n = mode->total_tokens;
  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<SplitMix64> streams;
  streams.reserve(chunks);
  SplitMix64 root(mode->seed);
  for (std::uint64_t c = 0; c < chunks; ++c) streams.push_back(root.split());

  std::vector<std::uint32_t> ranks(n);
  parallel_for(chunks, default_thread_count(), [&](std::size_t c) {
    SplitMix64 rng = streams[c];
    const std::uint64_t lo = c * kChunkSize;
    const std::uint64_t hi = std::min(n, lo + kChunkSize);
    for (std::uint64_t i = lo; i < hi; ++i) {
      ranks[i] = static_cast<std::uint32_t>(table.sample(rng) + 1);
    }
  });
  return ranks;
}

FrequencyCounts synth_sample(const SynthSpec& spec) {
  const std::vector<std::uint32_t> ranks = sample_ranks(spec);
  std::vector<std::uint64_t> per_rank;
  for (std::uint32_t r : ranks) {
    if (r > per_rank.size()) per_rank.resize(r);
    ++per_rank[r - 1];
  }
  FrequencyCounts counts;
  for (std::size_t i = 0; i < per_rank.size(); ++i) {
    if (per_rank[i] == 0) continue;
    counts.entries.emplace("w" + std::to_string(i + 1), per_rank[i]);
    counts.total_tokens += per_rank[i];
  }
  return counts;
}

void write_token_stream(std::ostream& out,
                        std::span<const std::uint32_t> ranks) {
  std::string buffer;
  buffer.reserve(1 << 16);
  for (std::uint32_t r : ranks) {
    buffer += 'w';
    buffer += std::to_string(r);
    buffer += '\n';
    if (buffer.size() > (1 << 16) - 16) {
      out << buffer;
      buffer.clear();
    }
  }
  out << buffer;
}

}  // namespace rankfit
