#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rankfit/models.hpp"
#include "rankfit/rankfreq.hpp"

namespace rankfit {

enum class Weighting {
  // One residual per tie group, all weighted equally.
  kUniformPerPoint,
};

struct FitConfig {
  // Outer search range for t (two-param), searched on ln t.
  double t_min = 1e-3;
  double t_max = 1e3;
  // Search range for the Zipf-Mandelbrot offset and the Ding gamma, in rank
  // units, searched on the log scale.
  double offset_min = 1e-3;
  double offset_max = 1e7;
  unsigned grid_points = 64;
  double refine_tolerance = 1e-6;
  Weighting weighting = Weighting::kUniformPerPoint;
  // 0 means default_thread_count().
  unsigned threads = 0;
};

// Throws std::invalid_argument on an inconsistent configuration.
void validate_config(const FitConfig& config);

struct Goodness {
  double sse_log10 = 0.0;
  double rmse_log10 = 0.0;
  double r_squared_log10 = 0.0;
};

struct FitResult {
  ModelParams params;
  double sse_log10 = 0.0;
  double r_squared_log10 = 0.0;
  double rmse_log10 = 0.0;
  // Two-param only: the fit violates s < 1 or s*t < 1.
  bool singular = false;
  std::vector<std::string> warnings;
};

// Real-valued (rank, frequency) points. Fitting works on curves; tables
// convert point by point, one entry per tie group.
struct RankCurve {
  std::vector<double> ranks;
  std::vector<double> frequencies;

  std::size_t size() const noexcept { return ranks.size(); }
};

RankCurve to_curve(const RankFrequencyTable& table);

// Closed-form s for a fixed t and the natural-log residual sum of squares
// at that (s, t).
struct TwoParamProfile {
  double s = 0.0;
  double sse = 0.0;
  bool clamped = false;
};

inline constexpr double kMinS = 1e-9;

TwoParamProfile two_param_profile(const RankCurve& curve,
                                  std::uint64_t r_max, double r_exp,
                                  double t);

// Least squares of ln f against the two-parameter law, with r_max and r_exp
// held at their data values. Throws DataError for fewer than 3 points or a
// constant frequency column.
FitResult fit_two_param(const RankFrequencyTable& table,
                        const CorpusStats& stats, const FitConfig& config);
FitResult fit_two_param(const RankCurve& curve, std::uint64_t r_max,
                        double r_exp, const FitConfig& config);

// Least squares in log10 space for the baselines. Li uses `r_max` as its
// reversed-rank origin; other families ignore it. Throws DataError when the
// curve has too few points and NumericError when the normal equations are
// near-singular.
FitResult fit_baseline(const RankFrequencyTable& table, ModelFamily family,
                       const FitConfig& config);
FitResult fit_baseline(const RankCurve& curve, ModelFamily family,
                       std::uint64_t r_max, const FitConfig& config);

// Dispatches on family.
FitResult fit_model(const RankFrequencyTable& table, const CorpusStats& stats,
                    ModelFamily family, const FitConfig& config);

Goodness goodness(const RankFrequencyTable& table, const ModelParams& params);
Goodness goodness(const RankCurve& curve, const ModelParams& params);

}  // namespace rankfit
