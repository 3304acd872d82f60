#include "rankfit/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "oracles.hpp"

namespace rankfit {
namespace {

SynthSpec TwoParamSpec(double s, double t, std::uint64_t r_max, double r_exp) {
  SynthSpec spec;
  spec.model = TwoParamModel{s, t, r_max, r_exp};
  return spec;
}

TEST(SplitMixTest, KnownFirstOutput) {
  // reference value of the published SplitMix64 for seed 0
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
}

TEST(SplitMixTest, UnitInterval) {
  SplitMix64 rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.next_double();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(AliasTableTest, MatchesWeights) {
  const std::vector<double> w{1.0, 0.0, 3.0, 6.0};
  AliasTable table(w);
  SplitMix64 rng(11);
  std::vector<int> hits(w.size());
  const int n = 400000;
  for (int i = 0; i < n; ++i) ++hits[table.sample(rng)];
  EXPECT_EQ(hits[1], 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double p = w[i] / 10.0;
    const double se = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(static_cast<double>(hits[i]) / n, p, 4 * se + 1e-12);
  }
}

TEST(AliasTableTest, RejectsBadWeights) {
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_THROW(AliasTable{zero}, std::invalid_argument);
  const std::vector<double> negative{1.0, -1.0};
  EXPECT_THROW(AliasTable{negative}, std::invalid_argument);
}

TEST(RankGridTest, LogGridHasExactSize) {
  for (std::uint64_t r_max : {1ULL, 2ULL, 10ULL, 63ULL, 64ULL, 65ULL, 100ULL,
                              1000ULL, 63096ULL, 10000000ULL}) {
    for (unsigned n : {2u, 3u, 16u, 64u, 200u}) {
      const auto g = rank_grid(LogSpacedRanks{n}, r_max);
      ASSERT_EQ(g.size(), std::min<std::uint64_t>(n, r_max)) << r_max << " " << n;
      EXPECT_EQ(g.front(), 1u);
      EXPECT_EQ(g.back(), r_max);
      for (std::size_t i = 1; i < g.size(); ++i) ASSERT_LT(g[i - 1], g[i]);
    }
  }
}

TEST(RankGridTest, AllRanks) {
  const auto g = rank_grid(AllRanks{}, 7);
  EXPECT_EQ(g, (std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7}));
}

TEST(SynthExactTest, TwoParamAnchorIsOne) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t r_max = 10 + rng() % 100000;
    SynthSpec spec = TwoParamSpec(0.5 * u(rng), 10 * u(rng), r_max,
                                  1 + 0.3 * r_max * u(rng));
    const RankFrequencyTable table = synth_exact(spec);
    EXPECT_EQ(table.points.back().frequency, 1u);
    EXPECT_EQ(table.points.back().rank, r_max);
    const RankCurve curve = synth_curve(spec);
    EXPECT_NEAR(curve.frequencies.back(), 1.0, 1e-12);
  }
}

TEST(SynthExactTest, PowerLawEndpoints) {
  SynthSpec spec;
  spec.model = PowerLaw{1.0, 3.0};
  spec.grid = AllRanks{};
  spec.max_rank = 1000;
  const RankFrequencyTable table = synth_exact(spec);
  EXPECT_EQ(table.points.front().rank, 1u);
  EXPECT_EQ(table.points.front().frequency, 1000u);
  EXPECT_EQ(table.points.back().rank, 1000u);
  EXPECT_EQ(table.points.back().frequency, 1u);
  EXPECT_NO_THROW(validate_table(table));
}

TEST(SynthExactTest, TablesAreValidForEveryFamily) {
  const std::vector<ModelParams> models{
      TwoParamModel{0.15, 4.8, 5000, 300.0}, PowerLaw{0.9, 4.0},
      ZipfMandelbrot{1.1, 3.0, 4.5}, Li{1.0, 0.5, 4.0, 5000},
      Ding3{0.9, 1.5, 400.0, 6.0}};
  for (const auto& m : models) {
    for (RankGrid grid : {RankGrid{AllRanks{}}, RankGrid{LogSpacedRanks{40}}}) {
      SynthSpec spec;
      spec.model = m;
      spec.grid = grid;
      spec.max_rank = 5000;
      const RankFrequencyTable table = synth_exact(spec);
      EXPECT_NO_THROW(validate_table(table));
    }
  }
}

TEST(SynthExactTest, RankDomainErrors) {
  SynthSpec spec;
  spec.model = PowerLaw{1.0, 3.0};
  EXPECT_THROW(rank_domain(spec), std::invalid_argument);
  spec.model = TwoParamModel{0.1, 1.0, 100, 10.0};
  spec.max_rank = 50;
  EXPECT_THROW(rank_domain(spec), std::invalid_argument);
  spec.max_rank = 100;
  EXPECT_EQ(rank_domain(spec), 100u);
}

TEST(SelfConsistencyTest, ConvergesWithinTwentyIterations) {
  for (auto [s, t] : {std::pair{0.15, 4.8}, std::pair{0.18, 4.74},
                      std::pair{0.3, 1.5}, std::pair{0.05, 20.0}}) {
    const std::uint64_t r_max = 30000;
    const double r_exp = self_consistent_r_exp(s, t, r_max, 20);
    SynthSpec spec = TwoParamSpec(s, t, r_max, r_exp);
    spec.grid = AllRanks{};
    const double implied = compute_r_exp(synth_exact(spec));
    EXPECT_NEAR(implied / r_exp, 1.0, 0.02) << s << " " << t;
  }
}

TEST(SelfConsistencyTest, UnroundedMatchesDirectMean) {
  const double s = 0.2, t = 3.0;
  const std::uint64_t r_max = 2000;
  const double r_exp = self_consistent_r_exp(s, t, r_max, 100, false);
  double num = 0, den = 0;
  for (std::uint64_t r = 1; r <= r_max; ++r) {
    const double f =
        std::exp(oracle::two_param_ln_f_direct(r, s, t, r_max, r_exp));
    num += r * f;
    den += f;
  }
  EXPECT_NEAR(r_exp, num / den, 1e-6 * r_exp);
}

TEST(SampleTest, DeterministicPerSeed) {
  SynthSpec spec = TwoParamSpec(0.15, 4.8, 10000, 500.0);
  spec.mode = SampleMode{200000, 7};
  const auto a = sample_ranks(spec);
  const auto b = sample_ranks(spec);
  EXPECT_EQ(a, b);
  spec.mode = SampleMode{200000, 8};
  EXPECT_NE(a, sample_ranks(spec));
  std::ostringstream sa, sb;
  write_token_stream(sa, a);
  write_token_stream(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().substr(0, sa.str().find('\n')).front(), 'w');
}

TEST(SampleTest, PrefixStableAcrossLengths) {
  SynthSpec spec = TwoParamSpec(0.15, 4.8, 10000, 500.0);
  spec.mode = SampleMode{100000, 7};
  const auto shorter = sample_ranks(spec);
  spec.mode = SampleMode{300000, 7};
  const auto longer = sample_ranks(spec);
  ASSERT_GE(longer.size(), shorter.size());
  // chunks are seeded independently, so full chunks repeat exactly
  const std::size_t full = (shorter.size() / 65536) * 65536;
  EXPECT_TRUE(std::equal(shorter.begin(), shorter.begin() + full,
                         longer.begin()));
}

TEST(SampleTest, ZeroTokensAndTooFewTokens) {
  SynthSpec spec = TwoParamSpec(0.15, 4.8, 1000, 50.0);
  spec.mode = SampleMode{0, 1};
  EXPECT_TRUE(sample_ranks(spec).empty());
  spec.mode = SampleMode{999, 1};
  EXPECT_THROW(sample_ranks(spec), std::invalid_argument);
}

TEST(SampleTest, MeanRankMatchesTruncatedExpectation) {
  const double s = 0.15, t = 4.8, r_exp = 400.0;
  const std::uint64_t r_max = 8000;
  double m1 = 0, m2 = 0, z = 0;
  for (std::uint64_t r = 1; r <= r_max; ++r) {
    const double f =
        std::exp(oracle::two_param_ln_f_direct(r, s, t, r_max, r_exp));
    z += f;
    m1 += r * f;
    m2 += static_cast<double>(r) * r * f;
  }
  const double mean = m1 / z;
  const double sd = std::sqrt(m2 / z - mean * mean);
  for (std::uint64_t seed : {1, 2, 3}) {
    SynthSpec spec = TwoParamSpec(s, t, r_max, r_exp);
    const std::uint64_t n = 500000;
    spec.mode = SampleMode{n, seed};
    double sum = 0;
    for (auto r : sample_ranks(spec)) sum += r;
    EXPECT_NEAR(sum / n, mean, 3 * sd / std::sqrt(static_cast<double>(n)));
  }
}

TEST(SampleTest, HeadFrequenciesConvergeWithTokens) {
  SynthSpec spec;
  spec.model = PowerLaw{1.0, 0.0};
  spec.max_rank = 1000;
  double z = 0;
  for (int r = 1; r <= 1000; ++r) z += 1.0 / r;
  double prev_err = std::numeric_limits<double>::infinity();
  for (std::uint64_t n : {10000ULL, 1000000ULL}) {
    spec.mode = SampleMode{n, 5};
    const FrequencyCounts counts = synth_sample(spec);
    EXPECT_EQ(counts.total_tokens, n);
    const double p1 = 1.0 / z;
    const double got =
        static_cast<double>(counts.entries.at("w1")) / static_cast<double>(n);
    const double se = std::sqrt(p1 * (1 - p1) / n);
    EXPECT_NEAR(got, p1, 4 * se);
    prev_err = std::min(prev_err, std::abs(got - p1));
  }
  EXPECT_LT(prev_err, 0.01);
}

TEST(SampleTest, SampledTableIsValid) {
  SynthSpec spec = TwoParamSpec(0.2, 3.0, 3000, 200.0);
  spec.mode = SampleMode{100000, 9};
  const RankFrequencyTable table = build_table(synth_sample(spec));
  EXPECT_NO_THROW(validate_table(table));
  EXPECT_EQ(table.total_tokens, 100000u);
}

TEST(RoundTripTest, EveryFamilyRecoversItsGenerator) {
  const std::uint64_t r_max = 20000;
  FitConfig config;
  config.threads = 1;
  const std::vector<ModelParams> models{
      PowerLaw{0.95, 4.3}, ZipfMandelbrot{1.05, 2.5, 4.6},
      Li{0.9, 0.35, 4.2, r_max}, Ding3{0.93, 2.04, 800.0, 9.0}};
  for (const auto& m : models) {
    SynthSpec spec;
    spec.model = m;
    spec.max_rank = r_max;
    const RankCurve curve = synth_curve(spec);
    const FitResult fit = fit_baseline(curve, family_of(m), r_max, config);
    EXPECT_GT(fit.r_squared_log10, 1.0 - 1e-9) << to_string(family_of(m));
  }
  const double r_exp = self_consistent_r_exp(0.2, 3.0, r_max, 100, false);
  const RankCurve curve = synth_curve(TwoParamSpec(0.2, 3.0, r_max, r_exp));
  const auto fit = std::get<TwoParamModel>(
      fit_two_param(curve, r_max, r_exp, config).params);
  EXPECT_NEAR(fit.s, 0.2, 1e-3);
  EXPECT_NEAR(fit.t, 3.0, 0.03);
}

}  // namespace
}  // namespace rankfit
