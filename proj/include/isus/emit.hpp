#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "isus/errors.hpp"
#include "isus/experiments.hpp"
#include "isus/moments.hpp"
#include "isus/stats.hpp"

namespace isus {

enum class Format { Csv, Json };

/// 17-significant-digit rendering used in CSV output.
inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// JSON conversions. NaN is stored as null.
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json real_to_json(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

inline double real_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

inline nlohmann::json optional_to_json(const std::optional<double>& x) {
  if (!x) return nullptr;
  return *x;
}

inline std::optional<double> optional_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const Summary& s) {
  using detail::real_to_json;
  j = {{"count", s.count},
       {"mean", real_to_json(s.mean)},
       {"variance", real_to_json(s.variance)},
       {"mse", real_to_json(s.mse)},
       {"se_mean", real_to_json(s.se_mean)},
       {"se_variance", real_to_json(s.se_variance)},
       {"se_mse", real_to_json(s.se_mse)}};
}

inline void from_json(const nlohmann::json& j, Summary& s) {
  using detail::real_from_json;
  s.count = j.at("count").get<std::size_t>();
  s.mean = real_from_json(j.at("mean"));
  s.variance = real_from_json(j.at("variance"));
  s.mse = real_from_json(j.at("mse"));
  s.se_mean = real_from_json(j.at("se_mean"));
  s.se_variance = real_from_json(j.at("se_variance"));
  s.se_mse = real_from_json(j.at("se_mse"));
}

inline void to_json(nlohmann::json& j, const TrialStats& s) {
  j = {{"label", s.label},
       {"trials", s.trials},
       {"all", s.all},
       {"positive", s.positive},
       {"undefined_rate", detail::real_to_json(s.undefined_rate)},
       {"se_undefined_rate", detail::real_to_json(s.se_undefined_rate)}};
}

inline void from_json(const nlohmann::json& j, TrialStats& s) {
  s.label = j.at("label").get<std::string>();
  s.trials = j.at("trials").get<std::size_t>();
  s.all = j.at("all").get<Summary>();
  s.positive = j.at("positive").get<Summary>();
  s.undefined_rate = detail::real_from_json(j.at("undefined_rate"));
  s.se_undefined_rate = detail::real_from_json(j.at("se_undefined_rate"));
}

inline void to_json(nlohmann::json& j, const MomentReport& m) {
  j = {{"estimator", std::string(to_string(m.estimator))},
       {"regime", std::string(to_string(m.regime))},
       {"mean", m.mean},
       {"bias", m.bias},
       {"variance", detail::optional_to_json(m.variance)},
       {"mse", detail::optional_to_json(m.mse)}};
}

inline void from_json(const nlohmann::json& j, MomentReport& m) {
  const auto est = j.at("estimator").get<std::string>();
  const auto reg = j.at("regime").get<std::string>();
  m.estimator = est == "IS" ? Estimator::IS : Estimator::US;
  if (reg == to_string(Regime::Unconditional)) {
    m.regime = Regime::Unconditional;
  } else if (reg == to_string(Regime::PositiveCount)) {
    m.regime = Regime::PositiveCount;
  } else {
    m.regime = Regime::ExactCount;
  }
  m.mean = j.at("mean").get<double>();
  m.bias = j.at("bias").get<double>();
  m.variance = detail::optional_from_json(j.at("variance"));
  m.mse = detail::optional_from_json(j.at("mse"));
}

inline void to_json(nlohmann::json& j, const SweepRow& r) {
  j = {{"coordinate_name", r.coordinate_name},
       {"coordinate", r.coordinate},
       {"theta", r.theta},
       {"n", r.n},
       {"c", r.c},
       {"v", r.v},
       {"t", r.t},
       {"rho", r.rho},
       {"seed", r.seed},
       {"analytic",
        {{"is_unconditional", r.is_u},
         {"is_positive", r.is_c},
         {"us_unconditional", r.us_u},
         {"us_positive", r.us_c}}},
       {"empirical", {{"IS", r.empirical.is}, {"US", r.empirical.us}, {"WIS", r.empirical.wis}}}};
}

inline void from_json(const nlohmann::json& j, SweepRow& r) {
  r.coordinate_name = j.at("coordinate_name").get<std::string>();
  r.coordinate = j.at("coordinate").get<double>();
  r.theta = j.at("theta").get<double>();
  r.n = j.at("n").get<std::size_t>();
  r.c = j.at("c").get<double>();
  r.v = j.at("v").get<double>();
  r.t = j.at("t").get<double>();
  r.rho = j.at("rho").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  const auto& a = j.at("analytic");
  r.is_u = a.at("is_unconditional").get<MomentReport>();
  r.is_c = a.at("is_positive").get<MomentReport>();
  r.us_u = a.at("us_unconditional").get<MomentReport>();
  r.us_c = a.at("us_positive").get<MomentReport>();
  const auto& e = j.at("empirical");
  r.empirical.is = e.at("IS").get<TrialStats>();
  r.empirical.us = e.at("US").get<TrialStats>();
  r.empirical.wis = e.at("WIS").get<TrialStats>();
}

#define ISUS_BOUNDS_FIELDS(X)                                                                  \
  X(f_max) X(c) X(delta) X(theta) X(is_lower) X(is_upper) X(us_lower) X(us_upper)              \
      X(is_lower_truncated) X(is_upper_truncated) X(us_lower_truncated) X(us_upper_truncated) \
          X(rho_empirical) X(rho_se) X(rho_analytic)

#define ISUS_COVERAGE_FIELDS(X)                                                          \
  X(f_max) X(c) X(delta) X(b) X(is_coverage) X(us_coverage) X(is_margin) X(us_mean_margin) \
      X(mean_k) X(observed_ratio) X(predicted_ratio)

inline void to_json(nlohmann::json& j, const BoundsRow& r) {
  j = nlohmann::json::object();
#define X(name) j[#name] = detail::real_to_json(r.name);
  ISUS_BOUNDS_FIELDS(X)
#undef X
  j["n"] = r.n;
  j["us_defined"] = r.us_defined;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
}

inline void from_json(const nlohmann::json& j, BoundsRow& r) {
#define X(name) r.name = detail::real_from_json(j.at(#name));
  ISUS_BOUNDS_FIELDS(X)
#undef X
  r.n = j.at("n").get<std::size_t>();
  r.us_defined = j.at("us_defined").get<std::size_t>();
  r.trials = j.at("trials").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
}

inline void to_json(nlohmann::json& j, const CoverageRow& r) {
  j = nlohmann::json::object();
#define X(name) j[#name] = detail::real_to_json(r.name);
  ISUS_COVERAGE_FIELDS(X)
#undef X
  j["n"] = r.n;
  j["trials"] = r.trials;
  j["us_defined"] = r.us_defined;
  j["seed"] = r.seed;
}

inline void from_json(const nlohmann::json& j, CoverageRow& r) {
#define X(name) r.name = detail::real_from_json(j.at(#name));
  ISUS_COVERAGE_FIELDS(X)
#undef X
  r.n = j.at("n").get<std::size_t>();
  r.trials = j.at("trials").get<std::size_t>();
  r.us_defined = j.at("us_defined").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
}

// ---------------------------------------------------------------------------
// CSV records
// ---------------------------------------------------------------------------

/// Header for sweep rows. Illustrative rows use the documented schema;
/// treatment rows lead with cr_min and add the control variate t after v.
inline std::vector<std::string> csv_header(const std::vector<SweepRow>& rows) {
  const bool treatment = rows.front().coordinate_name == "cr_min";
  std::vector<std::string> h = {rows.front().coordinate_name, "theta", "n", "c", "v"};
  if (treatment) h.emplace_back("t");
  for (const char* name :
       {"analytic_is_var_u", "analytic_is_var_c", "analytic_us_var_u", "analytic_us_var_c",
        "analytic_us_mse_u", "emp_is_mean", "emp_is_var", "emp_is_mse", "emp_us_mean",
        "emp_us_var", "emp_us_mse", "emp_wis_mean", "emp_wis_var", "emp_wis_mse",
        "undefined_rate", "seed"}) {
    h.emplace_back(name);
  }
  return h;
}

inline std::vector<std::string> csv_record(const SweepRow& r) {
  std::vector<std::string> f = {format_real(r.coordinate), format_real(r.theta),
                                std::to_string(r.n), format_real(r.c), format_real(r.v)};
  if (r.coordinate_name == "cr_min") f.push_back(format_real(r.t));
  for (double x : {r.is_u.variance.value_or(std::nan("")), r.is_c.variance.value_or(std::nan("")),
                   r.us_u.variance.value_or(std::nan("")), r.us_c.variance.value_or(std::nan("")),
                   r.us_u.mse.value_or(std::nan("")), r.empirical.is.all.mean,
                   r.empirical.is.all.variance, r.empirical.is.all.mse, r.empirical.us.all.mean,
                   r.empirical.us.all.variance, r.empirical.us.all.mse, r.empirical.wis.all.mean,
                   r.empirical.wis.all.variance, r.empirical.wis.all.mse,
                   r.empirical.us.undefined_rate}) {
    f.push_back(format_real(x));
  }
  f.push_back(std::to_string(r.seed));
  return f;
}

inline std::vector<std::string> csv_header(const std::vector<BoundsRow>&) {
  return {"f_max",           "n",         "c",          "delta",    "theta",
          "is_lower",        "is_upper",  "us_lower",   "us_upper", "is_lower_truncated",
          "is_upper_truncated", "us_lower_truncated", "us_upper_truncated", "us_defined",
          "trials",          "rho_empirical", "rho_se", "rho_analytic", "seed"};
}

inline std::vector<std::string> csv_record(const BoundsRow& r) {
  return {format_real(r.f_max),
          std::to_string(r.n),
          format_real(r.c),
          format_real(r.delta),
          format_real(r.theta),
          format_real(r.is_lower),
          format_real(r.is_upper),
          format_real(r.us_lower),
          format_real(r.us_upper),
          format_real(r.is_lower_truncated),
          format_real(r.is_upper_truncated),
          format_real(r.us_lower_truncated),
          format_real(r.us_upper_truncated),
          std::to_string(r.us_defined),
          std::to_string(r.trials),
          format_real(r.rho_empirical),
          format_real(r.rho_se),
          format_real(r.rho_analytic),
          std::to_string(r.seed)};
}

inline std::vector<std::string> csv_header(const std::vector<CoverageRow>&) {
  return {"f_max",     "n",          "c",          "delta",          "b",
          "trials",    "is_coverage", "us_defined", "us_coverage",   "is_margin",
          "us_mean_margin", "mean_k", "observed_ratio", "predicted_ratio", "seed"};
}

inline std::vector<std::string> csv_record(const CoverageRow& r) {
  return {format_real(r.f_max),          std::to_string(r.n),
          format_real(r.c),              format_real(r.delta),
          format_real(r.b),              std::to_string(r.trials),
          format_real(r.is_coverage),    std::to_string(r.us_defined),
          format_real(r.us_coverage),    format_real(r.is_margin),
          format_real(r.us_mean_margin), format_real(r.mean_k),
          format_real(r.observed_ratio), format_real(r.predicted_ratio),
          std::to_string(r.seed)};
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

template <class Row>
std::string render(const std::vector<Row>& rows, Format format) {
  if (rows.empty()) throw ConfigError("nothing to emit: rows are empty");
  if (format == Format::Json) {
    nlohmann::json j = rows;
    return j.dump(2) + "\n";
  }
  std::string out;
  auto join = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  join(csv_header(rows));
  for (const auto& r : rows) join(csv_record(r));
  return out;
}

/// Writes `rows` to `path` ("-" for stdout). Output bytes depend only on the rows.
template <class Row>
void emit(const std::vector<Row>& rows, Format format, const std::string& path) {
  const auto text = render(rows, format);
  if (path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

template <class Row>
std::vector<Row> read_json_rows(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return j.get<std::vector<Row>>();
}

inline Format parse_format(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ConfigError("unknown format '" + std::string(s) + "' (expected csv or json)");
}

}  // namespace isus
