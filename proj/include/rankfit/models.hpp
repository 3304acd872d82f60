#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

namespace rankfit {

// Two-parameter anchored law
//   f(r) = (r_max / r)^(1-s) * ((r_max + t r_exp) / (r + t r_exp))^(1+(1+t)s)
// with data constants r_max and r_exp. f(r_max) = 1 by construction.
struct TwoParamModel {
  double s = 0.0;
  double t = 0.0;
  std::uint64_t r_max = 1;
  double r_exp = 1.0;

  // s < 1 and s*t < 1: the implied rank distribution has a mean but no
  // variance.
  bool well_behaved() const noexcept { return s < 1.0 && s * t < 1.0; }
};

// Baseline families. log_c is the log10 proportionality constant.
struct PowerLaw {
  double alpha = 1.0;
  double log_c = 0.0;
};

// f = C (r + beta_offset)^-alpha
struct ZipfMandelbrot {
  double alpha = 1.0;
  double beta_offset = 1.0;
  double log_c = 0.0;
};

// f = C r^-alpha (r_max + 1 - r)^beta
struct Li {
  double alpha = 1.0;
  double beta = 1.0;
  double log_c = 0.0;
  std::uint64_t r_max = 1;
};

// f = C r^-alpha (r + gamma)^-beta, gamma in rank units.
struct Ding3 {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double log_c = 0.0;
};

using BaselineParams = std::variant<PowerLaw, ZipfMandelbrot, Li, Ding3>;
using ModelParams =
    std::variant<TwoParamModel, PowerLaw, ZipfMandelbrot, Li, Ding3>;

enum class ModelFamily { kTwoParam, kPowerLaw, kZipfMandelbrot, kLi, kDing3 };

ModelFamily family_of(const ModelParams& params) noexcept;
std::string_view to_string(ModelFamily family);
ModelFamily parse_model_family(std::string_view name);
// Number of fitted parameters (data constants excluded).
int free_parameter_count(ModelFamily family) noexcept;

// Natural log of the two-parameter law. Throws DomainError unless
// 1 <= r <= r_max, s >= 0, t >= 0 and r_exp > 0.
double two_param_log_f(double r, const TwoParamModel& m);

// log10 f for a baseline. Throws DomainError for r < 1, and for Li when
// r > r_max.
double baseline_log10_f(double r, const BaselineParams& b);

// log10 f for any family.
double model_log10_f(double r, const ModelParams& params);

// Generalized beta prime density
//   p (x/q)^(alpha p - 1) (1 + (x/q)^p)^(-alpha-beta) / (q B(alpha, beta)).
struct GBPParams {
  double alpha = 1.0;
  double beta = 1.0;
  double p = 1.0;
  double q = 1.0;
};

// Substitution alpha = s, beta = 1 + s t, q = t r_exp, p = 1.
GBPParams gbp_from_two_param(double s, double t, double r_exp);

// ln B(a, b) via log-gamma.
double log_beta(double a, double b);

// Natural-log density. Throws DomainError for x <= 0 or invalid params.
double gbp_log_pdf(double x, const GBPParams& g);

// Moments of the p = 1 density (DomainError otherwise). Absent when the
// moment does not exist: the mean needs beta > 1, the k-th raw moment
// beta > k.
std::optional<double> gbp_mean(const GBPParams& g);
std::optional<double> gbp_raw_moment(const GBPParams& g, unsigned k);

}  // namespace rankfit
