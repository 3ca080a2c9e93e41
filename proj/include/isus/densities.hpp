#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "isus/errors.hpp"
#include "isus/numeric.hpp"
#include "isus/random.hpp"

namespace isus {

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  [[nodiscard]] double length() const noexcept { return hi - lo; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Union of closed intervals, sorted by lower endpoint. Intervals may touch at
/// an endpoint but must not overlap on a set of positive length.
class IntervalSet {
 public:
  IntervalSet() = default;

  IntervalSet(std::initializer_list<Interval> parts) : IntervalSet(std::vector<Interval>(parts)) {}

  explicit IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) {
    for (const auto& p : parts_) {
      if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || p.lo > p.hi) {
        throw ConfigError("interval endpoints must be finite with lo <= hi");
      }
    }
    std::sort(parts_.begin(), parts_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < parts_.size(); ++i) {
      if (parts_[i - 1].hi > parts_[i].lo) {
        throw ConfigError("intervals overlap");
      }
    }
  }

  [[nodiscard]] bool contains(double x) const noexcept {
    return std::any_of(parts_.begin(), parts_.end(),
                       [x](const Interval& p) { return p.contains(x); });
  }

  [[nodiscard]] const std::vector<Interval>& parts() const noexcept { return parts_; }
  [[nodiscard]] bool empty() const noexcept { return parts_.empty(); }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> parts_;
};

/// Piecewise-constant density over disjoint intervals. Piece weights are
/// probability masses and are normalized to sum to one.
class PiecewiseUniform {
 public:
  struct Piece {
    Interval range;
    double mass = 0.0;
  };

  explicit PiecewiseUniform(std::vector<Piece> pieces) {
    double total = 0.0;
    std::vector<Interval> ranges;
    for (const auto& p : pieces) {
      if (!(p.mass >= 0.0) || !std::isfinite(p.mass)) {
        throw ConfigError("piecewise-uniform: piece mass must be finite and nonnegative");
      }
      if (p.mass == 0.0) continue;
      if (!(p.range.hi > p.range.lo)) {
        throw ConfigError("piecewise-uniform: piece with positive mass needs positive length");
      }
      ranges.push_back(p.range);
      pieces_.push_back(p);
      total += p.mass;
    }
    if (pieces_.empty()) throw ConfigError("piecewise-uniform: no piece with positive mass");
    support_ = IntervalSet(std::move(ranges));
    std::sort(pieces_.begin(), pieces_.end(),
              [](const Piece& a, const Piece& b) { return a.range.lo < b.range.lo; });
    double running = 0.0;
    for (auto& p : pieces_) {
      p.mass /= total;
      running += p.mass;
      cumulative_.push_back(running);
    }
    cumulative_.back() = 1.0;
  }

  static PiecewiseUniform uniform(double lo, double hi) {
    return PiecewiseUniform({Piece{{lo, hi}, 1.0}});
  }

  [[nodiscard]] double pdf(double x) const noexcept {
    for (const auto& p : pieces_) {
      if (p.range.contains(x)) return p.mass / p.range.length();
    }
    return 0.0;
  }

  [[nodiscard]] bool in_support(double x) const noexcept { return support_.contains(x); }

  [[nodiscard]] double mass(const IntervalSet& set) const noexcept {
    CompensatedSum acc;
    for (const auto& p : pieces_) {
      for (const auto& q : set.parts()) {
        const double lo = std::max(p.range.lo, q.lo);
        const double hi = std::min(p.range.hi, q.hi);
        if (hi > lo) acc.add(p.mass * ((hi - lo) / p.range.length()));
      }
    }
    return std::clamp(acc.value(), 0.0, 1.0);
  }

  double sample(RandomStream& stream) const {
    const double pick = stream.uniform01();
    std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(cumulative_.begin(), cumulative_.end(), pick) - cumulative_.begin());
    idx = std::min(idx, pieces_.size() - 1);
    const auto& r = pieces_[idx].range;
    return r.lo + stream.uniform01() * r.length();
  }

  [[nodiscard]] const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  [[nodiscard]] const IntervalSet& support() const noexcept { return support_; }

 private:
  std::vector<Piece> pieces_;
  std::vector<double> cumulative_;
  IntervalSet support_;
};

/// Normal(mean, stddev) restricted to [lo, hi] and renormalized.
class TruncatedNormal {
 public:
  TruncatedNormal(double lo, double hi, double mean, double stddev)
      : lo_(lo), hi_(hi), mean_(mean), stddev_(stddev), normal_(validated(lo, hi, mean, stddev)) {
    cdf_lo_ = boost::math::cdf(normal_, lo_);
    cdf_hi_ = boost::math::cdf(normal_, hi_);
    normalizer_ = cdf_hi_ - cdf_lo_;
    if (!(normalizer_ > 0.0)) throw ConfigError("truncated-normal: interval has no mass");
  }

  [[nodiscard]] double pdf(double x) const {
    if (!in_support(x)) return 0.0;
    return boost::math::pdf(normal_, x) / normalizer_;
  }

  [[nodiscard]] bool in_support(double x) const noexcept { return lo_ <= x && x <= hi_; }

  [[nodiscard]] double mass(const IntervalSet& set) const {
    CompensatedSum acc;
    for (const auto& q : set.parts()) {
      const double lo = std::max(lo_, q.lo);
      const double hi = std::min(hi_, q.hi);
      if (hi > lo) acc.add(boost::math::cdf(normal_, hi) - boost::math::cdf(normal_, lo));
    }
    return std::clamp(acc.value() / normalizer_, 0.0, 1.0);
  }

  /// Inverse-CDF draw over the truncated quantile range.
  double sample(RandomStream& stream) const {
    const double p = cdf_lo_ + stream.uniform_open01() * normalizer_;
    return std::clamp(boost::math::quantile(normal_, p), lo_, hi_);
  }

  [[nodiscard]] double lo() const noexcept { return lo_; }
  [[nodiscard]] double hi() const noexcept { return hi_; }
  [[nodiscard]] double cdf(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    return (boost::math::cdf(normal_, x) - cdf_lo_) / normalizer_;
  }
  [[nodiscard]] double mean() const noexcept { return mean_; }
  [[nodiscard]] double stddev() const noexcept { return stddev_; }
  [[nodiscard]] IntervalSet support() const { return IntervalSet{Interval{lo_, hi_}}; }

 private:
  static boost::math::normal_distribution<double> validated(double lo, double hi, double mean,
                                                            double stddev) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
      throw ConfigError("truncated-normal: need finite lo < hi");
    }
    if (!std::isfinite(mean) || !(stddev > 0.0) || !std::isfinite(stddev)) {
      throw ConfigError("truncated-normal: need finite mean and stddev > 0");
    }
    return boost::math::normal_distribution<double>(mean, stddev);
  }

  double lo_, hi_, mean_, stddev_;
  boost::math::normal_distribution<double> normal_;
  double cdf_lo_ = 0.0, cdf_hi_ = 0.0, normalizer_ = 1.0;
};

/// Caller-supplied density. Interval masses are not available for it; any
/// pruning set built over it must carry its mass explicitly.
struct CustomDensity {
  std::function<double(double)> pdf;
  std::function<double(RandomStream&)> sampler;
  std::function<bool(double)> support;
};

/// Evaluable, sampleable univariate density.
class Density {
 public:
  Density(PiecewiseUniform d) : impl_(std::move(d)) {}  // NOLINT(google-explicit-constructor)
  Density(TruncatedNormal d) : impl_(std::move(d)) {}   // NOLINT(google-explicit-constructor)
  Density(CustomDensity d) : impl_(std::move(d)) {      // NOLINT(google-explicit-constructor)
    const auto& c = std::get<CustomDensity>(impl_);
    if (!c.pdf || !c.sampler || !c.support) {
      throw ConfigError("custom density needs pdf, sampler and support");
    }
  }

  [[nodiscard]] double pdf(double x) const {
    return std::visit(
        [x](const auto& d) -> double {
          if constexpr (std::is_same_v<std::decay_t<decltype(d)>, CustomDensity>) {
            return d.support(x) ? d.pdf(x) : 0.0;
          } else {
            return d.pdf(x);
          }
        },
        impl_);
  }

  [[nodiscard]] bool in_support(double x) const {
    return std::visit(
        [x](const auto& d) -> bool {
          if constexpr (std::is_same_v<std::decay_t<decltype(d)>, CustomDensity>) {
            return d.support(x);
          } else {
            return d.in_support(x);
          }
        },
        impl_);
  }

  double sample(RandomStream& stream) const {
    return std::visit(
        [&stream](const auto& d) -> double {
          if constexpr (std::is_same_v<std::decay_t<decltype(d)>, CustomDensity>) {
            return d.sampler(stream);
          } else {
            return d.sample(stream);
          }
        },
        impl_);
  }

  /// Analytic mass over `set`; throws ConfigError for custom densities.
  [[nodiscard]] double mass(const IntervalSet& set) const {
    return std::visit(
        [&set](const auto& d) -> double {
          if constexpr (std::is_same_v<std::decay_t<decltype(d)>, CustomDensity>) {
            throw ConfigError("interval mass is not available for a custom density");
          } else {
            return d.mass(set);
          }
        },
        impl_);
  }

  /// Support as a union of intervals, if the density kind knows it.
  [[nodiscard]] std::optional<IntervalSet> support_intervals() const {
    if (const auto* pu = std::get_if<PiecewiseUniform>(&impl_)) return pu->support();
    if (const auto* tn = std::get_if<TruncatedNormal>(&impl_)) return tn->support();
    return std::nullopt;
  }

  [[nodiscard]] const PiecewiseUniform* as_piecewise_uniform() const noexcept {
    return std::get_if<PiecewiseUniform>(&impl_);
  }
  [[nodiscard]] const TruncatedNormal* as_truncated_normal() const noexcept {
    return std::get_if<TruncatedNormal>(&impl_);
  }

 private:
  std::variant<PiecewiseUniform, TruncatedNormal, CustomDensity> impl_;
};

inline double pdf_eval(const Density& d, double x) { return d.pdf(x); }

/// Analytic integral of `d` over a union of disjoint intervals.
inline double interval_mass(const Density& d, const IntervalSet& intervals) {
  return d.mass(intervals);
}

/// Evaluation function h with declared support H and range [h_min, h_max].
class EvaluationFunction {
 public:
  EvaluationFunction(std::function<double(double)> fn, IntervalSet support, double h_min,
                     double h_max)
      : fn_(std::move(fn)), support_(std::move(support)), h_min_(h_min), h_max_(h_max) {
    if (!fn_) throw ConfigError("evaluation function is empty");
    if (!(h_min <= h_max)) throw ConfigError("evaluation range needs h_min <= h_max");
  }

  /// h(x); zero outside H. Throws MisconfigurationError if a value escapes
  /// the declared range.
  double operator()(double x) const {
    if (!support_.contains(x)) return 0.0;
    const double y = fn_(x);
    if (!(y >= h_min_ && y <= h_max_)) {
      throw MisconfigurationError("evaluation function left its declared range at x = " +
                                  std::to_string(x));
    }
    return y;
  }

  [[nodiscard]] const IntervalSet& support() const noexcept { return support_; }
  [[nodiscard]] double h_min() const noexcept { return h_min_; }
  [[nodiscard]] double h_max() const noexcept { return h_max_; }

 private:
  std::function<double(double)> fn_;
  IntervalSet support_;
  double h_min_, h_max_;
};

/// Pruning set C with its sampling mass c.
class PruningSet {
 public:
  PruningSet(std::function<bool(double)> indicator, double mass)
      : indicator_(std::move(indicator)), mass_(mass) {
    if (!indicator_) throw ConfigError("pruning indicator is empty");
    if (!(mass > 0.0 && mass <= 1.0)) throw ConfigError("pruning mass c must lie in (0, 1]");
  }

  /// Interval-described C; c is integrated analytically under `sampling`.
  static PruningSet from_intervals(IntervalSet set, const Density& sampling) {
    const double c = interval_mass(sampling, set);
    PruningSet out([set](double x) { return set.contains(x); }, c);
    out.intervals_ = std::move(set);
    return out;
  }

  [[nodiscard]] bool contains(double x) const { return indicator_(x); }
  [[nodiscard]] double mass() const noexcept { return mass_; }
  [[nodiscard]] const std::optional<IntervalSet>& intervals() const noexcept { return intervals_; }

 private:
  std::function<bool(double)> indicator_;
  double mass_;
  std::optional<IntervalSet> intervals_;
};

/// Target f, sampling g, evaluation h, and pruning set C.
struct EstimationProblem {
  Density target;
  Density sampling;
  EvaluationFunction evaluation;
  PruningSet pruning;
};

/// n i.i.d. draws from a sampling density.
struct SampleBatch {
  std::vector<double> values;
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t n() const noexcept { return values.size(); }
};

inline SampleBatch draw(const Density& d, RandomStream& stream, std::size_t count) {
  if (count == 0) throw ConfigError("draw: count must be positive");
  SampleBatch batch;
  batch.seed = stream.seed();
  batch.values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) batch.values.push_back(d.sample(stream));
  return batch;
}

}  // namespace isus
