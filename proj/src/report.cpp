#include "rankfit/report.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <ostream>

#include "rankfit/error.hpp"

namespace rankfit {

using json = Json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double r6(double x) { return round_significant(x, 6); }

json config_to_json(const FitConfig& c) {
  return {{"t_search_range", {r6(c.t_min), r6(c.t_max)}},
          {"offset_search_range", {r6(c.offset_min), r6(c.offset_max)}},
          {"grid_points", c.grid_points},
          {"refine_tolerance", r6(c.refine_tolerance)},
          {"weighting", "uniform-per-point"}};
}

FitConfig config_from_json(const json& j) {
  FitConfig c;
  c.t_min = j.at("t_search_range").at(0).get<double>();
  c.t_max = j.at("t_search_range").at(1).get<double>();
  c.offset_min = j.at("offset_search_range").at(0).get<double>();
  c.offset_max = j.at("offset_search_range").at(1).get<double>();
  c.grid_points = j.at("grid_points").get<unsigned>();
  c.refine_tolerance = j.at("refine_tolerance").get<double>();
  return c;
}

json tokenizer_to_json(const TokenizerConfig& t) {
  return {{"lowercase", t.lowercase},
          {"min_count", t.min_count},
          {"token_pattern", std::string(to_string(t.token_pattern))}};
}

TokenizerConfig tokenizer_from_json(const json& j) {
  TokenizerConfig t;
  t.lowercase = j.at("lowercase").get<bool>();
  t.min_count = j.at("min_count").get<std::uint64_t>();
  t.token_pattern =
      parse_token_pattern(j.at("token_pattern").get<std::string>());
  return t;
}

}  // namespace

double round_significant(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x,
                           std::chars_format::scientific, digits - 1);
  double out = x;
  std::from_chars(buf, res.ptr, out);
  return out;
}

json params_to_json(const ModelParams& params) {
  return std::visit(
      Overloaded{
          [](const TwoParamModel& m) -> json {
            return {{"s", r6(m.s)},
                    {"t", r6(m.t)},
                    {"r_max", m.r_max},
                    {"r_exp", r6(m.r_exp)}};
          },
          [](const PowerLaw& p) -> json {
            return {{"alpha", r6(p.alpha)}, {"log_c", r6(p.log_c)}};
          },
          [](const ZipfMandelbrot& z) -> json {
            return {{"alpha", r6(z.alpha)},
                    {"beta", r6(z.beta_offset)},
                    {"log_c", r6(z.log_c)}};
          },
          [](const Li& l) -> json {
            return {{"alpha", r6(l.alpha)},
                    {"beta", r6(l.beta)},
                    {"log_c", r6(l.log_c)},
                    {"r_max", l.r_max}};
          },
          [](const Ding3& d) -> json {
            return {{"alpha", r6(d.alpha)},
                    {"beta", r6(d.beta)},
                    {"gamma", r6(d.gamma)},
                    {"gamma_log10", r6(std::log10(d.gamma))},
                    {"log_c", r6(d.log_c)}};
          }},
      params);
}

ModelParams params_from_json(ModelFamily family, const json& j) {
  const auto d = [&](const char* key) { return j.at(key).get<double>(); };
  const auto u = [&](const char* key) {
    return j.at(key).get<std::uint64_t>();
  };
  switch (family) {
    case ModelFamily::kTwoParam:
      return TwoParamModel{d("s"), d("t"), u("r_max"), d("r_exp")};
    case ModelFamily::kPowerLaw:
      return PowerLaw{d("alpha"), d("log_c")};
    case ModelFamily::kZipfMandelbrot:
      return ZipfMandelbrot{d("alpha"), d("beta"), d("log_c")};
    case ModelFamily::kLi:
      return Li{d("alpha"), d("beta"), d("log_c"), u("r_max")};
    case ModelFamily::kDing3:
      return Ding3{d("alpha"), d("beta"), d("gamma"), d("log_c")};
  }
  throw DataError("unknown model family");
}

json report_to_json(const FitReport& report) {
  const CorpusStats& s = report.stats;
  json models = json::array();
  for (const FitResult& r : report.per_model) {
    models.push_back(
        {{"family", std::string(to_string(family_of(r.params)))},
         {"params", params_to_json(r.params)},
         {"sse_log10", r6(r.sse_log10)},
         {"rmse_log10", r6(r.rmse_log10)},
         {"r2_log10", r6(r.r_squared_log10)},
         {"singular", r.singular},
         {"warnings", r.warnings}});
  }
  json protocol = {{"fit", config_to_json(report.config)},
                   {"tie_rank", std::string(to_string(report.tie_rank))},
                   {"r_exp_override", nullptr},
                   {"r_max_override", nullptr},
                   {"tokenizer", nullptr}};
  if (report.r_exp_override) protocol["r_exp_override"] = *report.r_exp_override;
  if (report.r_max_override) protocol["r_max_override"] = *report.r_max_override;
  if (report.tokenizer) protocol["tokenizer"] = tokenizer_to_json(*report.tokenizer);
  return {{"corpus_id", report.corpus_id},
          {"stats",
           {{"r_max", s.r_max},
            {"r_max_log10", r6(std::log10(static_cast<double>(s.r_max)))},
            {"r_exp", r6(s.r_exp)},
            {"r_exp_log10", r6(std::log10(s.r_exp))},
            {"vocab_size", s.vocab_size},
            {"total_tokens", s.total_tokens}}},
          {"models", std::move(models)},
          {"protocol", std::move(protocol)},
          {"tool_version", report.tool_version}};
}

FitReport report_from_json(const json& j) {
  try {
    FitReport report;
    report.corpus_id = j.at("corpus_id").get<std::string>();
    const json& s = j.at("stats");
    report.stats.r_max = s.at("r_max").get<std::uint64_t>();
    report.stats.r_exp = s.at("r_exp").get<double>();
    report.stats.vocab_size = s.at("vocab_size").get<std::uint64_t>();
    report.stats.total_tokens = s.at("total_tokens").get<std::uint64_t>();
    for (const json& m : j.at("models")) {
      FitResult r;
      const ModelFamily family =
          parse_model_family(m.at("family").get<std::string>());
      r.params = params_from_json(family, m.at("params"));
      r.sse_log10 = m.at("sse_log10").get<double>();
      r.rmse_log10 = m.at("rmse_log10").get<double>();
      r.r_squared_log10 = m.at("r2_log10").get<double>();
      r.singular = m.at("singular").get<bool>();
      r.warnings = m.at("warnings").get<std::vector<std::string>>();
      report.per_model.push_back(std::move(r));
    }
    const json& protocol = j.at("protocol");
    report.config = config_from_json(protocol.at("fit"));
    report.tie_rank = parse_tie_rank(protocol.at("tie_rank").get<std::string>());
    if (!protocol.at("r_exp_override").is_null()) {
      report.r_exp_override = protocol.at("r_exp_override").get<double>();
    }
    if (!protocol.at("r_max_override").is_null()) {
      report.r_max_override =
          protocol.at("r_max_override").get<std::uint64_t>();
    }
    if (!protocol.at("tokenizer").is_null()) {
      report.tokenizer = tokenizer_from_json(protocol.at("tokenizer"));
    }
    report.tool_version = j.at("tool_version").get<std::string>();
    return report;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed fit report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed fit report: ") + e.what());
  }
}

void write_plot_data(std::ostream& out, const RankFrequencyTable& table,
                     const FitReport& report,
                     std::vector<std::string>& warnings) {
  out << "rank\tempirical_f";
  for (const FitResult& r : report.per_model) {
    out << '\t' << to_string(family_of(r.params));
  }
  out << '\n';
  for (const RankPoint& p : table.points) {
    out << p.rank << '\t' << p.frequency;
    for (const FitResult& r : report.per_model) {
      out << '\t';
      try {
        const double f = std::pow(
            10.0, model_log10_f(static_cast<double>(p.rank), r.params));
        out << fmt::format("{:.6f}", f);
      } catch (const DomainError& e) {
        warnings.push_back(fmt::format("rank {}: {}: {}", p.rank,
                                       to_string(family_of(r.params)),
                                       e.what()));
      }
    }
    out << '\n';
  }
}

}  // namespace rankfit
