#include "rankfit/models.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rankfit/error.hpp"

namespace rankfit {

namespace {

constexpr double kLn10 = std::numbers::ln10;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

void check_gbp(const GBPParams& g) {
  require(positive(g.alpha) && positive(g.beta) && positive(g.p) &&
              positive(g.q),
          "generalized beta prime parameters must be positive");
}

}  // namespace

ModelFamily family_of(const ModelParams& params) noexcept {
  return static_cast<ModelFamily>(params.index());
}

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::kTwoParam: return "two-param";
    case ModelFamily::kPowerLaw: return "power-law";
    case ModelFamily::kZipfMandelbrot: return "zipf-mandelbrot";
    case ModelFamily::kLi: return "li";
    case ModelFamily::kDing3: return "ding3";
  }
  return "unknown";
}

ModelFamily parse_model_family(std::string_view name) {
  for (auto f : {ModelFamily::kTwoParam, ModelFamily::kPowerLaw,
                 ModelFamily::kZipfMandelbrot, ModelFamily::kLi,
                 ModelFamily::kDing3}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown model family: " + std::string(name));
}

int free_parameter_count(ModelFamily family) noexcept {
  switch (family) {
    case ModelFamily::kTwoParam: return 2;
    case ModelFamily::kPowerLaw: return 2;
    case ModelFamily::kZipfMandelbrot: return 3;
    case ModelFamily::kLi: return 3;
    case ModelFamily::kDing3: return 4;
  }
  return 0;
}

double two_param_log_f(double r, const TwoParamModel& m) {
  require(std::isfinite(m.s) && m.s >= 0.0 && std::isfinite(m.t) &&
              m.t >= 0.0,
          "two-param model requires s >= 0 and t >= 0");
  require(m.r_max >= 1 && positive(m.r_exp),
          "two-param model requires r_max >= 1 and r_exp > 0");
  const double r_max = static_cast<double>(m.r_max);
  require(r >= 1.0 && r <= r_max, "rank outside [1, r_max]");

  const double q = m.t * m.r_exp;
  const double head = std::log(r_max) - std::log(r);
  const double tail = std::log1p((r_max - r) / (r + q));
  return (1.0 - m.s) * head + (1.0 + (1.0 + m.t) * m.s) * tail;
}

double baseline_log10_f(double r, const BaselineParams& b) {
  require(r >= 1.0, "rank must be at least 1");
  return std::visit(
      Overloaded{
          [&](const PowerLaw& p) { return p.log_c - p.alpha * std::log10(r); },
          [&](const ZipfMandelbrot& z) {
            require(z.beta_offset > 0.0, "Zipf-Mandelbrot offset must be > 0");
            return z.log_c - z.alpha * std::log10(r + z.beta_offset);
          },
          [&](const Li& l) {
            const double reversed = static_cast<double>(l.r_max) + 1.0 - r;
            require(reversed >= 1.0, "rank beyond r_max for Li model");
            return l.log_c - l.alpha * std::log10(r) +
                   l.beta * std::log10(reversed);
          },
          [&](const Ding3& d) {
            require(d.gamma > 0.0, "Ding gamma must be > 0");
            return d.log_c - d.alpha * std::log10(r) -
                   d.beta * std::log10(r + d.gamma);
          }},
      b);
}

double model_log10_f(double r, const ModelParams& params) {
  return std::visit(
      Overloaded{[&](const TwoParamModel& m) {
                   return two_param_log_f(r, m) / kLn10;
                 },
                 [&](const auto& baseline) {
                   return baseline_log10_f(r, BaselineParams{baseline});
                 }},
      params);
}

GBPParams gbp_from_two_param(double s, double t, double r_exp) {
  return {s, 1.0 + s * t, 1.0, t * r_exp};
}

double log_beta(double a, double b) {
  using boost::math::lgamma;
  return lgamma(a) + lgamma(b) - lgamma(a + b);
}

double gbp_log_pdf(double x, const GBPParams& g) {
  check_gbp(g);
  require(x > 0.0 && std::isfinite(x), "density argument must be positive");
  const double log_u = std::log(x) - std::log(g.q);
  const double z = g.p * log_u;
  // ln(1 + e^z) without overflow
  const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z))
                                  : std::log1p(std::exp(z));
  return std::log(g.p) - std::log(g.q) + (g.alpha * g.p - 1.0) * log_u -
         (g.alpha + g.beta) * softplus - log_beta(g.alpha, g.beta);
}

std::optional<double> gbp_mean(const GBPParams& g) {
  check_gbp(g);
  require(g.p == 1.0, "closed-form moments need p = 1");
  if (g.beta <= 1.0) return std::nullopt;
  return g.q * g.alpha / (g.beta - 1.0);
}

std::optional<double> gbp_raw_moment(const GBPParams& g, unsigned k) {
  check_gbp(g);
  require(g.p == 1.0, "closed-form moments need p = 1");
  require(k >= 1, "moment order must be positive");
  if (g.beta <= static_cast<double>(k)) return std::nullopt;
  // q^k B(alpha+k, beta-k) / B(alpha, beta) as a finite product
  double value = 1.0;
  for (unsigned j = 0; j < k; ++j) {
    value *= g.q * (g.alpha + j) / (g.beta - 1.0 - j);
  }
  return value;
}

}  // namespace rankfit
