#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string_view>

#include "isus/densities.hpp"
#include "isus/errors.hpp"
#include "isus/estimators.hpp"

namespace isus {

enum class Side { Lower, Upper };
enum class BoundMethod { IsHoeffding, UsHoeffding };

constexpr std::string_view to_string(BoundMethod m) noexcept {
  return m == BoundMethod::IsHoeffding ? "IS-hoeffding" : "US-hoeffding";
}

/// Inputs to a one-sided Hoeffding bound. `b` is the range of f(x) h(x) / g(x)
/// over G; the bound holds with probability at least 1 - delta.
struct BoundRequest {
  EstimateResult estimate;
  double b = 0.0;
  double c = 1.0;
  std::size_t n = 1;
  double delta = 0.05;
  Side side = Side::Lower;
};

struct BoundResult {
  double value = 0.0;
  bool defined = false;
  BoundMethod method = BoundMethod::IsHoeffding;
};

namespace detail {

inline void validate(const BoundRequest& req) {
  if (!(req.b >= 0.0) || !std::isfinite(req.b)) throw ConfigError("b must be finite and >= 0");
  // delta = 1 is accepted and yields a zero margin.
  if (!(req.delta > 0.0 && req.delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  if (req.n == 0) throw ConfigError("n must be positive");
  if (!(req.c > 0.0 && req.c <= 1.0)) throw ConfigError("c must lie in (0, 1]");
}

inline double signed_offset(Side side, double margin) noexcept {
  return side == Side::Lower ? -margin : margin;
}

}  // namespace detail

/// Hoeffding half-width for the mean of `count` i.i.d. variables of range `range`.
inline double hoeffding_margin(double range, std::size_t count, double delta) {
  return range * std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(count)));
}

inline BoundResult hoeffding_is(const BoundRequest& req) {
  detail::validate(req);
  const double margin = hoeffding_margin(req.b, req.n, req.delta);
  return {req.estimate.value + detail::signed_offset(req.side, margin), true,
          BoundMethod::IsHoeffding};
}

/// The k in-C terms averaged by US have range c b.
inline BoundResult hoeffding_us(const BoundRequest& req, std::size_t k) {
  detail::validate(req);
  if (k == 0 || !req.estimate.defined) return {0.0, false, BoundMethod::UsHoeffding};
  const double margin = hoeffding_margin(req.c * req.b, k, req.delta);
  return {req.estimate.value + detail::signed_offset(req.side, margin), true,
          BoundMethod::UsHoeffding};
}

/// Clamp into the deterministic range of h. An undefined bound becomes the
/// deterministic bound for its side.
inline BoundResult truncate_bound(BoundResult res, double h_lo, double h_hi, Side side) {
  if (!(h_lo <= h_hi)) throw ConfigError("truncate_bound needs h_lo <= h_hi");
  if (!res.defined) {
    res.value = side == Side::Lower ? h_lo : h_hi;
    res.defined = true;
    return res;
  }
  res.value = std::clamp(res.value, h_lo, h_hi);
  return res;
}

struct BoundInterval {
  BoundResult lower;
  BoundResult upper;
};

/// Two-sided 1 - delta interval: each side is a one-sided bound at delta / 2.
inline BoundInterval hoeffding_interval_is(BoundRequest req) {
  req.delta /= 2.0;
  req.side = Side::Lower;
  const auto lo = hoeffding_is(req);
  req.side = Side::Upper;
  return {lo, hoeffding_is(req)};
}

inline BoundInterval hoeffding_interval_us(BoundRequest req, std::size_t k) {
  req.delta /= 2.0;
  req.side = Side::Lower;
  const auto lo = hoeffding_us(req, k);
  req.side = Side::Upper;
  return {lo, hoeffding_us(req, k)};
}

/// Exact range of f(x) h(x) / g(x) over G for piecewise-uniform f and g, with
/// h bounded on each piece by [h_min, h_max] of the evaluation function.
/// Zero is included whenever some part of G has f = 0 or h = 0.
inline double weighted_range(const PiecewiseUniform& target, const PiecewiseUniform& sampling,
                             const EvaluationFunction& h) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  auto include = [&](double y) {
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  };

  // Split G at every endpoint of f's pieces and h's support, then inspect
  // each elementary cell by its midpoint.
  std::vector<double> cuts;
  for (const auto& p : sampling.pieces()) {
    cuts.push_back(p.range.lo);
    cuts.push_back(p.range.hi);
  }
  for (const auto& p : target.pieces()) {
    cuts.push_back(p.range.lo);
    cuts.push_back(p.range.hi);
  }
  for (const auto& p : h.support().parts()) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const double g = sampling.pdf(mid);
    if (!(g > 0.0)) continue;
    const double w = target.pdf(mid) / g;
    if (w == 0.0 || !h.support().contains(mid)) {
      include(0.0);
      continue;
    }
    include(w * h.h_min());
    include(w * h.h_max());
    if (h.h_min() <= 0.0 && h.h_max() >= 0.0) include(0.0);
  }
  if (lo > hi) return 0.0;
  return hi - lo;
}

}  // namespace isus
