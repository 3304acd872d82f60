#include "rankfit/fitter.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rankfit/error.hpp"
#include "rankfit/optimize.hpp"
#include "rankfit/parallel.hpp"

namespace rankfit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Above this the normal equations are treated as singular.
constexpr double kMaxCondition = 1e12;

unsigned thread_count(const FitConfig& config) {
  return config.threads == 0 ? default_thread_count() : config.threads;
}

struct LinearFit {
  Eigen::VectorXd coef;
  double sse = kInf;
  double condition = kInf;
};

LinearFit solve_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  LinearFit fit;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::MatrixXd r =
      qr.matrixR().topLeftCorner(x.cols(), x.cols()).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  fit.condition = smin > 0.0 ? sv(0) / smin : kInf;
  if (!(fit.condition <= kMaxCondition)) return fit;
  fit.coef = qr.solve(y);
  fit.sse = (y - x * fit.coef).squaredNorm();
  return fit;
}

Eigen::VectorXd log10_frequencies(const RankCurve& curve) {
  Eigen::VectorXd y(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    y(i) = std::log10(curve.frequencies[i]);
  }
  return y;
}

void check_curve(const RankCurve& curve) {
  if (curve.ranks.size() != curve.frequencies.size()) {
    throw std::invalid_argument("rank and frequency columns differ in length");
  }
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!(curve.ranks[i] >= 1.0) || !(curve.frequencies[i] > 0.0) ||
        !std::isfinite(curve.ranks[i]) || !std::isfinite(curve.frequencies[i])) {
      throw DataError("point " + std::to_string(i) +
                      ": rank must be >= 1 and frequency > 0");
    }
  }
}

void require_points(const RankCurve& curve, ModelFamily family) {
  const int needed = free_parameter_count(family) + 1;
  if (curve.size() < static_cast<std::size_t>(needed)) {
    throw DataError("underdetermined: " + std::string(to_string(family)) +
                    " needs at least " + std::to_string(needed) +
                    " points, got " + std::to_string(curve.size()));
  }
}

std::string condition_message(ModelFamily family, double condition) {
  std::ostringstream os;
  os << "near-singular normal equations for " << to_string(family)
     << " (condition number " << condition << ")";
  return os.str();
}

FitResult finish(const RankCurve& curve, ModelParams params,
                 std::vector<std::string> warnings) {
  FitResult result;
  const Goodness g = goodness(curve, params);
  result.params = std::move(params);
  result.sse_log10 = g.sse_log10;
  result.rmse_log10 = g.rmse_log10;
  result.r_squared_log10 = g.r_squared_log10;
  result.warnings = std::move(warnings);
  if (const auto* m = std::get_if<TwoParamModel>(&result.params)) {
    result.singular = !m->well_behaved();
  }
  return result;
}

// Design matrix for a baseline family at a given profiled offset (ignored by
// PowerLaw and Li).
Eigen::MatrixXd baseline_design(const RankCurve& curve, ModelFamily family,
                                double offset, std::uint64_t r_max) {
  const auto n = static_cast<Eigen::Index>(curve.size());
  const int cols = family == ModelFamily::kPowerLaw ||
                           family == ModelFamily::kZipfMandelbrot
                       ? 2
                       : 3;
  Eigen::MatrixXd x(n, cols);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = curve.ranks[i];
    x(i, 0) = 1.0;
    switch (family) {
      case ModelFamily::kPowerLaw:
        x(i, 1) = -std::log10(r);
        break;
      case ModelFamily::kZipfMandelbrot:
        x(i, 1) = -std::log10(r + offset);
        break;
      case ModelFamily::kLi:
        x(i, 1) = -std::log10(r);
        x(i, 2) = std::log10(static_cast<double>(r_max) + 1.0 - r);
        break;
      case ModelFamily::kDing3:
        x(i, 1) = -std::log10(r);
        x(i, 2) = -std::log10(r + offset);
        break;
      case ModelFamily::kTwoParam:
        throw std::logic_error("two-param is not a baseline");
    }
  }
  return x;
}

}  // namespace

void validate_config(const FitConfig& config) {
  if (!(config.t_min > 0.0) || !(config.t_min < config.t_max) ||
      !std::isfinite(config.t_max)) {
    throw std::invalid_argument("t search range must satisfy 0 < min < max");
  }
  if (!(config.offset_min > 0.0) || !(config.offset_min < config.offset_max) ||
      !std::isfinite(config.offset_max)) {
    throw std::invalid_argument(
        "offset search range must satisfy 0 < min < max");
  }
  if (config.grid_points < 8) {
    throw std::invalid_argument("grid_points must be at least 8");
  }
  if (!(config.refine_tolerance > 0.0)) {
    throw std::invalid_argument("refine_tolerance must be positive");
  }
}

RankCurve to_curve(const RankFrequencyTable& table) {
  RankCurve curve;
  curve.ranks.reserve(table.points.size());
  curve.frequencies.reserve(table.points.size());
  for (const auto& p : table.points) {
    curve.ranks.push_back(static_cast<double>(p.rank));
    curve.frequencies.push_back(static_cast<double>(p.frequency));
  }
  return curve;
}

TwoParamProfile two_param_profile(const RankCurve& curve,
                                  std::uint64_t r_max, double r_exp,
                                  double t) {
  const double rm = static_cast<double>(r_max);
  const double q = t * r_exp;
  const std::size_t n = curve.size();
  std::vector<double> c0(n), c1(n), y(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = curve.ranks[i];
    const double head = std::log(rm) - std::log(r);
    const double tail = std::log1p((rm - r) / (r + q));
    c0[i] = head + tail;
    c1[i] = -head + (1.0 + t) * tail;
    y[i] = std::log(curve.frequencies[i]);
    num += c1[i] * (y[i] - c0[i]);
    den += c1[i] * c1[i];
  }
  TwoParamProfile profile;
  if (!(den > 0.0)) {
    profile.sse = kInf;
    return profile;
  }
  profile.s = num / den;
  if (!(profile.s > kMinS)) {
    profile.s = kMinS;
    profile.clamped = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - c0[i] - profile.s * c1[i];
    profile.sse += e * e;
  }
  return profile;
}

FitResult fit_two_param(const RankFrequencyTable& table,
                        const CorpusStats& stats, const FitConfig& config) {
  validate_table(table);
  return fit_two_param(to_curve(table), stats.r_max, stats.r_exp, config);
}

FitResult fit_two_param(const RankCurve& curve, std::uint64_t r_max,
                        double r_exp, const FitConfig& config) {
  validate_config(config);
  check_curve(curve);
  if (curve.size() < 3) {
    throw DataError("two-param fit needs at least 3 points, got " +
                    std::to_string(curve.size()));
  }
  bool constant = true;
  for (double f : curve.frequencies) constant &= (f == curve.frequencies[0]);
  if (constant) throw DataError("degenerate table");
  if (!(r_exp > 0.0) || r_max < 1) {
    throw DomainError("r_max and r_exp must be positive");
  }
  for (double r : curve.ranks) {
    if (r > static_cast<double>(r_max)) {
      throw DomainError("rank outside [1, r_max]");
    }
  }

  const auto objective = [&](double log_t) {
    return two_param_profile(curve, r_max, r_exp, std::exp(log_t)).sse;
  };
  const ScalarMinimum best =
      grid_then_golden(objective, std::log(config.t_min),
                       std::log(config.t_max), config.grid_points,
                       config.refine_tolerance, thread_count(config));

  TwoParamModel model;
  model.t = std::exp(best.x);
  const TwoParamProfile profile =
      two_param_profile(curve, r_max, r_exp, model.t);
  model.s = profile.s;
  model.r_max = r_max;
  model.r_exp = r_exp;

  std::vector<std::string> warnings;
  if (profile.clamped) {
    warnings.push_back("s clamped to its lower bound 1e-9 at the optimum");
  }
  if (best.at_boundary) {
    warnings.push_back("t optimum on the boundary of the search range");
  }
  return finish(curve, model, std::move(warnings));
}

FitResult fit_baseline(const RankFrequencyTable& table, ModelFamily family,
                       const FitConfig& config) {
  validate_table(table);
  return fit_baseline(to_curve(table), family, compute_r_max(table), config);
}

FitResult fit_baseline(const RankCurve& curve, ModelFamily family,
                       std::uint64_t r_max, const FitConfig& config) {
  if (family == ModelFamily::kTwoParam) {
    throw std::invalid_argument("use fit_two_param for the two-param law");
  }
  validate_config(config);
  check_curve(curve);
  require_points(curve, family);
  if (family == ModelFamily::kLi) {
    for (double r : curve.ranks) {
      if (r > static_cast<double>(r_max)) {
        throw DomainError("rank beyond r_max for Li model");
      }
    }
  }

  const Eigen::VectorXd y = log10_frequencies(curve);
  std::vector<std::string> warnings;
  double offset = 0.0;
  if (family == ModelFamily::kZipfMandelbrot ||
      family == ModelFamily::kDing3) {
    const auto objective = [&](double log_offset) {
      return solve_ols(
                 baseline_design(curve, family, std::exp(log_offset), r_max), y)
          .sse;
    };
    const ScalarMinimum best = grid_then_golden(
        objective, std::log(config.offset_min), std::log(config.offset_max),
        config.grid_points, config.refine_tolerance, thread_count(config));
    offset = std::exp(best.x);
    if (best.at_boundary) {
      warnings.push_back(
          std::string(family == ModelFamily::kDing3 ? "gamma" : "beta") +
          " optimum on the boundary of the search range");
    }
  }

  const LinearFit fit =
      solve_ols(baseline_design(curve, family, offset, r_max), y);
  if (!(fit.condition <= kMaxCondition)) {
    throw NumericError(condition_message(family, fit.condition));
  }
  const Eigen::VectorXd& c = fit.coef;

  ModelParams params;
  switch (family) {
    case ModelFamily::kPowerLaw:
      params = PowerLaw{c(1), c(0)};
      break;
    case ModelFamily::kZipfMandelbrot:
      params = ZipfMandelbrot{c(1), offset, c(0)};
      break;
    case ModelFamily::kLi:
      params = Li{c(1), c(2), c(0), r_max};
      break;
    case ModelFamily::kDing3:
      params = Ding3{c(1), c(2), offset, c(0)};
      break;
    case ModelFamily::kTwoParam:
      break;
  }
  if (!(c(1) > 0.0)) warnings.push_back("fitted alpha is not positive");
  return finish(curve, std::move(params), std::move(warnings));
}

FitResult fit_model(const RankFrequencyTable& table, const CorpusStats& stats,
                    ModelFamily family, const FitConfig& config) {
  if (family == ModelFamily::kTwoParam) {
    return fit_two_param(table, stats, config);
  }
  validate_table(table);
  return fit_baseline(to_curve(table), family, stats.r_max, config);
}

Goodness goodness(const RankFrequencyTable& table, const ModelParams& params) {
  return goodness(to_curve(table), params);
}

Goodness goodness(const RankCurve& curve, const ModelParams& params) {
  const std::size_t n = curve.size();
  if (n == 0) throw DataError("no points to evaluate");
  double mean = 0.0;
  for (double f : curve.frequencies) mean += std::log10(f);
  mean /= static_cast<double>(n);

  Goodness g;
  double sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = std::log10(curve.frequencies[i]);
    const double e = y - model_log10_f(curve.ranks[i], params);
    g.sse_log10 += e * e;
    sst += (y - mean) * (y - mean);
  }
  g.rmse_log10 = std::sqrt(g.sse_log10 / static_cast<double>(n));
  if (sst > 0.0) {
    g.r_squared_log10 = 1.0 - g.sse_log10 / sst;
  } else {
    g.r_squared_log10 = g.sse_log10 == 0.0 ? 1.0 : 0.0;
  }
  return g;
}

}  // namespace rankfit
