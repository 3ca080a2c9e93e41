#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "isus/densities.hpp"
#include "isus/errors.hpp"

namespace isus {

// Problem configuration, as JSON:
//
//   {
//     "target":   { "kind": "piecewise-uniform", "pieces": [ {"lo": 0, "hi": 1, "mass": 1} ] },
//     "sampling": { "kind": "truncated-normal", "lo": 8.5, "hi": 11, "mean": 11, "stddev": 2.5 },
//     "evaluation": { "pieces": [ {"lo": 0, "hi": 0.5, "value": -1},
//                                 {"lo": 0.5, "hi": 1, "value": 1} ] },
//     "pruning": { "intervals": [ [0, 1] ], "c": 0.5 }
//   }
//
// h is piecewise constant; H is the union of its pieces and [h_min, h_max]
// the range of the piece values. When pruning "c" is omitted it is computed
// from the sampling density; when given for an analytic sampling density it
// must agree with the computed mass to 1e-12.

inline constexpr double kConfigMassTolerance = 1e-12;

namespace detail {

inline double number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ConfigError(std::string("config: expected number '") + key + "'");
  }
  return j.at(key).get<double>();
}

inline IntervalSet intervals_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("config: intervals must be an array of [lo, hi] pairs");
  std::vector<Interval> parts;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw ConfigError("config: interval must be [lo, hi]");
    parts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return IntervalSet(std::move(parts));
}

}  // namespace detail

inline Density density_from_json(const nlohmann::json& j) {
  const auto kind = j.value("kind", std::string{});
  if (kind == "piecewise-uniform") {
    std::vector<PiecewiseUniform::Piece> pieces;
    for (const auto& p : j.at("pieces")) {
      pieces.push_back({{detail::number(p, "lo"), detail::number(p, "hi")},
                        p.contains("mass") ? detail::number(p, "mass") : 1.0});
    }
    return PiecewiseUniform(std::move(pieces));
  }
  if (kind == "uniform") {
    return PiecewiseUniform::uniform(detail::number(j, "lo"), detail::number(j, "hi"));
  }
  if (kind == "truncated-normal") {
    return TruncatedNormal(detail::number(j, "lo"), detail::number(j, "hi"),
                           detail::number(j, "mean"), detail::number(j, "stddev"));
  }
  throw ConfigError("config: unknown density kind '" + kind + "'");
}

inline EvaluationFunction evaluation_from_json(const nlohmann::json& j) {
  struct Piece {
    Interval range;
    double value;
  };
  std::vector<Piece> pieces;
  std::vector<Interval> support;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& p : j.at("pieces")) {
    Piece piece{{detail::number(p, "lo"), detail::number(p, "hi")}, detail::number(p, "value")};
    pieces.push_back(piece);
    support.push_back(piece.range);
    lo = std::min(lo, piece.value);
    hi = std::max(hi, piece.value);
  }
  if (pieces.empty()) throw ConfigError("config: evaluation needs at least one piece");
  IntervalSet h_support(std::move(support));
  return EvaluationFunction(
      [pieces](double x) {
        for (const auto& p : pieces) {
          if (p.range.contains(x)) return p.value;
        }
        return 0.0;
      },
      std::move(h_support), lo, hi);
}

inline PruningSet pruning_from_json(const nlohmann::json& j, const Density& sampling) {
  auto set = detail::intervals_from_json(j.at("intervals"));
  auto computed = PruningSet::from_intervals(set, sampling);
  if (j.contains("c")) {
    const double c = detail::number(j, "c");
    if (std::abs(c - computed.mass()) > kConfigMassTolerance) {
      throw ConfigError("config: pruning c = " + std::to_string(c) +
                        " disagrees with the sampling mass of its intervals (" +
                        std::to_string(computed.mass()) + ")");
    }
  }
  return computed;
}

inline EstimationProblem problem_from_json(const nlohmann::json& j) {
  auto target = density_from_json(j.at("target"));
  auto sampling = density_from_json(j.at("sampling"));
  auto evaluation = evaluation_from_json(j.at("evaluation"));
  auto pruning = pruning_from_json(j.at("pruning"), sampling);
  return {std::move(target), std::move(sampling), std::move(evaluation), std::move(pruning)};
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

}  // namespace isus
