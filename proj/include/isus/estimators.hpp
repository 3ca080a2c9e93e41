#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "isus/densities.hpp"
#include "isus/errors.hpp"
#include "isus/numeric.hpp"

namespace isus {

/// Point estimate plus the number of samples that landed in C.
/// `defined` is false exactly when the convention value 0 was substituted.
struct EstimateResult {
  double value = 0.0;
  std::size_t k = 0;
  bool defined = false;

  friend bool operator==(const EstimateResult&, const EstimateResult&) = default;
};

/// Constant control variate t.
struct ControlVariate {
  double t = 0.0;
};

/// One sample reduced to what the estimators need: its importance weight
/// f(x)/g(x), its observed value (h(x), or a noisy return), and whether it
/// lies in C.
struct Observation {
  double weight = 0.0;
  double value = 0.0;
  bool in_c = false;
};

namespace detail {

inline std::size_t count_in_c(std::span<const Observation> obs) noexcept {
  std::size_t k = 0;
  for (const auto& o : obs) k += o.in_c ? 1 : 0;
  return k;
}

inline void require_nonempty(std::size_t n) {
  if (n == 0) throw ConfigError("estimators need at least one sample");
}

}  // namespace detail

// Observation-level estimators. These are the computational core; the
// problem-level overloads below build observations and run support checks.

inline EstimateResult is_estimate(std::span<const Observation> obs, ControlVariate cv = {}) {
  detail::require_nonempty(obs.size());
  CompensatedSum acc;
  for (const auto& o : obs) acc.add(o.weight * (o.value - cv.t));
  return {cv.t + acc.value() / static_cast<double>(obs.size()), detail::count_in_c(obs), true};
}

inline EstimateResult us_estimate(std::span<const Observation> obs, double c,
                                  ControlVariate cv = {}) {
  detail::require_nonempty(obs.size());
  const std::size_t k = detail::count_in_c(obs);
  if (k == 0) return {0.0, 0, false};
  CompensatedSum acc;
  for (const auto& o : obs) {
    if (o.in_c) acc.add(o.weight * (o.value - cv.t));
  }
  return {cv.t + (c / static_cast<double>(k)) * acc.value(), k, true};
}

/// US with c replaced by k/n.
inline EstimateResult us_estimate_empirical_c(std::span<const Observation> obs) {
  detail::require_nonempty(obs.size());
  const std::size_t k = detail::count_in_c(obs);
  if (k == 0) return {0.0, 0, false};
  const double c_hat = static_cast<double>(k) / static_cast<double>(obs.size());
  return us_estimate(obs, c_hat);
}

/// Self-normalized IS, applied to (value - t) with t added back.
inline EstimateResult wis_estimate(std::span<const Observation> obs, ControlVariate cv = {}) {
  detail::require_nonempty(obs.size());
  CompensatedSum num;
  CompensatedSum den;
  for (const auto& o : obs) {
    num.add(o.weight * (o.value - cv.t));
    den.add(o.weight);
  }
  const std::size_t k = detail::count_in_c(obs);
  const double total = den.value();
  if (!(total > 0.0)) return {0.0, k, false};
  return {cv.t + num.value() / total, k, true};
}

// Problem-level API.

/// f(x)/g(x); x must lie where g is positive.
inline double importance_weight(const EstimationProblem& problem, double x) {
  const double g = problem.sampling.pdf(x);
  if (!(g > 0.0)) {
    throw MisconfigurationError("sample x = " + std::to_string(x) +
                                " has zero density under the sampling distribution");
  }
  return problem.target.pdf(x) / g;
}

inline std::size_t count_in_c(const EstimationProblem& problem, const SampleBatch& batch) {
  std::size_t k = 0;
  for (double x : batch.values) k += problem.pruning.contains(x) ? 1 : 0;
  return k;
}

/// Throws SupportViolationError if any sample with f(x) h(x) != 0 lies
/// outside C.
inline void check_support(const EstimationProblem& problem, const SampleBatch& batch) {
  for (double x : batch.values) {
    if (problem.pruning.contains(x)) continue;
    if (problem.target.pdf(x) * problem.evaluation(x) != 0.0) {
      throw SupportViolationError("sample x = " + std::to_string(x) +
                                  " has f(x) h(x) != 0 but lies outside the pruning set");
    }
  }
}

/// Throws ControlVariateSupportError if any sample with f(x) != 0 lies outside
/// C; a nonzero control variate makes h - t nonzero wherever f is.
inline void check_control_variate_support(const EstimationProblem& problem,
                                          const SampleBatch& batch) {
  for (double x : batch.values) {
    if (!problem.pruning.contains(x) && problem.target.pdf(x) != 0.0) {
      throw ControlVariateSupportError(
          "a nonzero control variate needs C to contain the target support; sample x = " +
          std::to_string(x) + " has f(x) != 0 outside C");
    }
  }
}

inline std::vector<Observation> observe(const EstimationProblem& problem,
                                        const SampleBatch& batch) {
  std::vector<Observation> obs;
  obs.reserve(batch.n());
  for (double x : batch.values) {
    obs.push_back({importance_weight(problem, x), problem.evaluation(x),
                   problem.pruning.contains(x)});
  }
  return obs;
}

inline EstimateResult is_estimate(const EstimationProblem& problem, const SampleBatch& batch,
                                  ControlVariate cv = {}) {
  const auto obs = observe(problem, batch);
  return is_estimate(obs, cv);
}

inline EstimateResult us_estimate(const EstimationProblem& problem, const SampleBatch& batch,
                                  ControlVariate cv = {}) {
  const auto obs = observe(problem, batch);
  check_support(problem, batch);
  if (cv.t != 0.0) check_control_variate_support(problem, batch);
  return us_estimate(obs, problem.pruning.mass(), cv);
}

inline EstimateResult us_estimate_empirical_c(const EstimationProblem& problem,
                                              const SampleBatch& batch) {
  const auto obs = observe(problem, batch);
  check_support(problem, batch);
  return us_estimate_empirical_c(obs);
}

inline EstimateResult wis_estimate(const EstimationProblem& problem, const SampleBatch& batch,
                                   ControlVariate cv = {}) {
  const auto obs = observe(problem, batch);
  return wis_estimate(obs, cv);
}

}  // namespace isus
