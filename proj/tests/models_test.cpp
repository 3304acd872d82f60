#include "rankfit/models.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rankfit/error.hpp"

namespace rankfit {
namespace {

TEST(TwoParamTest, AnchorAtRMax) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> s(0.01, 2.0), t(0.01, 20.0),
      log_rmax(0.0, 7.0);
  for (int i = 0; i < 1000; ++i) {
    TwoParamModel m;
    m.s = s(rng);
    m.t = t(rng);
    m.r_max = static_cast<std::uint64_t>(std::ceil(std::pow(10.0, log_rmax(rng))));
    m.r_exp = 1.0 + (m.r_max - 1.0) * std::uniform_real_distribution<>(0, 1)(rng);
    EXPECT_NEAR(two_param_log_f(static_cast<double>(m.r_max), m), 0.0, 1e-12);
  }
}

TEST(TwoParamTest, DirectSubstitution) {
  // s=0, t=1, r_max=100, r_exp=10, r=1: ln(100 * 110/11) = ln 1000
  EXPECT_NEAR(two_param_log_f(1.0, {0.0, 1.0, 100, 10.0}), std::log(1000.0),
              1e-12);
}

TEST(TwoParamTest, MatchesDirectFormula) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const TwoParamModel m{0.01 + 2 * u(rng), 0.01 + 20 * u(rng), 50000,
                          1.0 + 5000 * u(rng)};
    const double r = 1.0 + 49999 * u(rng);
    EXPECT_NEAR(two_param_log_f(r, m),
                oracle::two_param_ln_f_direct(r, m.s, m.t, 50000.0, m.r_exp),
                1e-9);
  }
}

TEST(TwoParamTest, EnglishRowIsStrictlyDecreasing) {
  const double r_max = std::pow(10.0, 4.88);
  const TwoParamModel m{0.18, 4.74, static_cast<std::uint64_t>(std::floor(r_max)),
                        std::pow(10.0, 3.01)};
  double prev = two_param_log_f(1.0, m);
  for (std::uint64_t r = 2; r <= m.r_max; ++r) {
    const double cur = two_param_log_f(static_cast<double>(r), m);
    ASSERT_LT(cur, prev) << "r=" << r;
    prev = cur;
  }
}

TEST(TwoParamTest, MonotoneAndAtLeastOneForWellBehavedS) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const TwoParamModel m{0.001 + 0.998 * u(rng), 0.01 + 20 * u(rng), 2000,
                          1.0 + 1999 * u(rng)};
    double prev = std::numeric_limits<double>::infinity();
    for (double r = 1.0; r <= 2000.0; r *= 1.07) {
      const double v = two_param_log_f(r, m);
      EXPECT_LT(v, prev);
      EXPECT_GE(v, 0.0);
      prev = v;
    }
  }
}

TEST(TwoParamTest, UnitSRemovesHeadFactor) {
  // s = 1: f = ((r_max + Q) / (r + Q))^(2 + t)
  const TwoParamModel m{1.0, 2.5, 1000, 40.0};
  for (double r : {1.0, 7.0, 300.0}) {
    EXPECT_NEAR(two_param_log_f(r, m),
                (2.0 + 2.5) * std::log((1000.0 + 100.0) / (r + 100.0)), 1e-12);
  }
}

TEST(TwoParamTest, DomainErrors) {
  const TwoParamModel m{0.2, 3.0, 100, 10.0};
  EXPECT_THROW(two_param_log_f(0.5, m), DomainError);
  EXPECT_THROW(two_param_log_f(100.5, m), DomainError);
  EXPECT_THROW(two_param_log_f(2.0, {-0.1, 3.0, 100, 10.0}), DomainError);
}

TEST(TwoParamTest, WellBehavedFlag) {
  EXPECT_TRUE((TwoParamModel{0.18, 4.74, 10, 1}.well_behaved()));
  EXPECT_FALSE((TwoParamModel{0.17, 10.08, 10, 1}.well_behaved()));
  EXPECT_FALSE((TwoParamModel{1.2, 0.1, 10, 1}.well_behaved()));
}

TEST(BaselineTest, HandValues) {
  EXPECT_NEAR(baseline_log10_f(10.0, PowerLaw{1.0, 2.0}), 1.0, 1e-15);
  // reversed rank r_max + 1 - r = 11 at r = 1
  EXPECT_NEAR(baseline_log10_f(1.0, Li{1.0, 1.0, 0.0, 11}), std::log10(11.0),
              1e-15);
  EXPECT_NEAR(baseline_log10_f(1.0, Li{1.0, 1.0, 0.0, 10}), 1.0, 1e-15);
  // bg row with gamma read as a log10 value
  const double ding =
      baseline_log10_f(1.0, Ding3{0.92, 2.05, std::pow(10.0, 4.25), 14.59});
  EXPECT_NEAR(ding, 14.59 - 2.05 * std::log10(1.0 + std::pow(10.0, 4.25)),
              1e-12);
  EXPECT_NEAR(ding, 5.88, 0.01);
  EXPECT_NEAR(baseline_log10_f(9.0, ZipfMandelbrot{2.0, 1.0, 3.0}), 1.0, 1e-15);
}

TEST(BaselineTest, DomainErrors) {
  EXPECT_THROW(baseline_log10_f(12.0, Li{1.0, 1.0, 0.0, 11}), DomainError);
  EXPECT_NO_THROW(baseline_log10_f(11.0, Li{1.0, 1.0, 0.0, 11}));
  EXPECT_THROW(baseline_log10_f(0.5, PowerLaw{1.0, 0.0}), DomainError);
}

TEST(ModelFamilyTest, NamesRoundTrip) {
  for (auto f : {ModelFamily::kTwoParam, ModelFamily::kPowerLaw,
                 ModelFamily::kZipfMandelbrot, ModelFamily::kLi,
                 ModelFamily::kDing3}) {
    EXPECT_EQ(parse_model_family(to_string(f)), f);
  }
  EXPECT_THROW(parse_model_family("zipf"), std::invalid_argument);
}

TEST(GbpTest, BetaPrimeAtOne) {
  EXPECT_NEAR(gbp_log_pdf(1.0, {1.0, 1.0, 1.0, 1.0}), std::log(0.25), 1e-14);
}

TEST(GbpTest, GeneralFormReducesToBetaPrime) {
  for (double a : {0.3, 1.0, 2.5}) {
    for (double b : {0.4, 1.0, 3.0}) {
      for (double x = 0.01; x < 1000.0; x *= 1.9) {
        const double beta_prime = (a - 1.0) * std::log(x) -
                                  (a + b) * std::log1p(x) - log_beta(a, b);
        EXPECT_NEAR(gbp_log_pdf(x, {a, b, 1.0, 1.0}), beta_prime, 1e-12);
      }
    }
  }
}

TEST(GbpTest, UnitShapeScaledForm) {
  // p = 1: x^(a-1) (x+q)^(-a-b) q^b / B(a, b)
  const GBPParams g{0.7, 2.2, 1.0, 35.0};
  for (double x = 0.1; x < 1e5; x *= 3.0) {
    const double expected = (g.alpha - 1.0) * std::log(x) -
                            (g.alpha + g.beta) * std::log(x + g.q) +
                            g.beta * std::log(g.q) - log_beta(g.alpha, g.beta);
    EXPECT_NEAR(gbp_log_pdf(x, g), expected, 1e-11);
  }
}

TEST(GbpTest, LogBetaAgainstKnownValues) {
  EXPECT_NEAR(log_beta(1.0, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(log_beta(3.0, 1.0), std::log(1.0 / 3.0), 1e-14);
  EXPECT_NEAR(log_beta(0.5, 0.5), std::log(M_PI), 1e-14);
  EXPECT_NEAR(log_beta(200.5, 3.25),
              std::lgamma(200.5) + std::lgamma(3.25) - std::lgamma(203.75),
              1e-11);
}

TEST(GbpTest, DensityIntegratesToOne) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> a(0.3, 4.0), b(0.3, 4.0), p(0.5, 3.0),
      lq(-2.0, 4.0);
  for (int i = 0; i < 20; ++i) {
    const GBPParams g{a(rng), b(rng), i % 2 ? 1.0 : p(rng),
                      std::pow(10.0, lq(rng))};
    EXPECT_NEAR(oracle::gbp_moment_quadrature(g, 0), 1.0, 1e-6)
        << g.alpha << " " << g.beta << " " << g.p << " " << g.q;
  }
}

TEST(GbpTest, DomainErrors) {
  EXPECT_THROW(gbp_log_pdf(0.0, {1, 1, 1, 1}), DomainError);
  EXPECT_THROW(gbp_log_pdf(1.0, {0, 1, 1, 1}), DomainError);
  EXPECT_THROW(gbp_mean({1, 2, 2, 1}), DomainError);
}

TEST(GbpMomentTest, Mean) {
  EXPECT_DOUBLE_EQ(*gbp_mean({0.5, 2.0, 1.0, 3.0}), 1.5);
  EXPECT_FALSE(gbp_mean({0.5, 1.0, 1.0, 3.0}).has_value());
}

TEST(GbpMomentTest, SubstitutionRecoversRExp) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> s(0.01, 2.0), t(0.01, 20.0),
      lr(0.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double r_exp = std::pow(10.0, lr(rng));
    const auto mean = gbp_mean(gbp_from_two_param(s(rng), t(rng), r_exp));
    ASSERT_TRUE(mean.has_value());
    EXPECT_NEAR(*mean, r_exp, 1e-9 * r_exp);
  }
}

TEST(GbpMomentTest, RawMoments) {
  const GBPParams g{1.7, 3.4, 1.0, 12.0};
  EXPECT_NEAR(*gbp_raw_moment(g, 1), *gbp_mean(g), 1e-12 * *gbp_mean(g));
  EXPECT_DOUBLE_EQ(*gbp_raw_moment({1.0, 3.0, 1.0, 1.0}, 2), 1.0);
  // q^k B(a+k, b-k) / B(a, b) via log-gamma
  const double via_beta = std::exp(3 * std::log(g.q) + log_beta(4.7, 0.4) -
                                   log_beta(1.7, 3.4));
  EXPECT_NEAR(*gbp_raw_moment(g, 3), via_beta, 1e-10 * via_beta);
  EXPECT_FALSE(gbp_raw_moment({1.0, 1.5, 1.0, 1.0}, 2).has_value());
  EXPECT_FALSE(gbp_raw_moment({1.0, 2.0, 1.0, 1.0}, 2).has_value());
}

TEST(GbpMomentTest, NoVarianceWhenStBelowOne) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double s = 0.01 + 0.98 * u(rng);
    const double t = (0.99 / s) * u(rng) + 1e-3;
    const GBPParams g = gbp_from_two_param(s, t, 100.0);
    EXPECT_TRUE(gbp_mean(g).has_value());
    EXPECT_FALSE(gbp_raw_moment(g, 2).has_value());
  }
  // singular regime: t > 1/s gives a variance
  EXPECT_TRUE(gbp_raw_moment(gbp_from_two_param(0.17, 10.08, 100.0), 2));
}

TEST(GbpMomentTest, QuadratureAgreesWhereDefined) {
  for (const GBPParams& g : {GBPParams{0.5, 2.0, 1.0, 3.0},
                             GBPParams{1.3, 3.7, 1.0, 0.2},
                             GBPParams{2.0, 4.5, 1.0, 50.0}}) {
    for (unsigned k = 1; k < g.beta; ++k) {
      const double exact = *gbp_raw_moment(g, k);
      EXPECT_NEAR(oracle::gbp_moment_quadrature(g, k), exact, 1e-6 * exact);
    }
  }
}

TEST(GbpMomentTest, TruncatedMomentGrowsWhereUndefined) {
  const GBPParams g{0.8, 1.3, 1.0, 2.0};
  const double r = 1e4 * g.q;
  const double s1 = oracle::gbp_partial_moment(g, 2, r);
  const double s2 = oracle::gbp_partial_moment(g, 2, 2 * r);
  EXPECT_GE(s2 / s1, 1.2);
  // and converges where defined
  const GBPParams h{0.8, 3.5, 1.0, 2.0};
  EXPECT_LT(oracle::gbp_partial_moment(h, 2, 2 * r) /
                oracle::gbp_partial_moment(h, 2, r),
            1.0001);
}

}  // namespace
}  // namespace rankfit
