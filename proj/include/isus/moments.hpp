#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>

#include "isus/errors.hpp"
#include "isus/numeric.hpp"

namespace isus {

enum class Estimator { IS, US };

/// Conditioning regime for a moment: no condition, k > 0, or k = kappa.
enum class Regime { Unconditional, PositiveCount, ExactCount };

constexpr std::string_view to_string(Estimator e) noexcept { return e == Estimator::IS ? "IS" : "US"; }

constexpr std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Unconditional: return "unconditional";
    case Regime::PositiveCount: return "k>0";
    case Regime::ExactCount: return "k=kappa";
  }
  return "?";
}

namespace detail {

inline void require_n_c(std::size_t n, double c) {
  if (n == 0) throw ConfigError("n must be positive");
  if (!(c > 0.0 && c <= 1.0)) throw ConfigError("c must lie in (0, 1]");
}

}  // namespace detail

/// Pr(k > 0) = 1 - (1 - c)^n, evaluated as -expm1(n log1p(-c)).
inline double rho(std::size_t n, double c) {
  detail::require_n_c(n, c);
  if (c == 1.0) return 1.0;
  if (n == 1) return c;
  return -std::expm1(static_cast<double>(n) * std::log1p(-c));
}

/// E[1/kappa | kappa > 0] for kappa ~ Binomial(n, c).
///
/// Terms are formed in log space and accumulated from the mode outward so the
/// dominant mass is summed first; tail terms that underflow stop the walk.
inline double binom_inv_moment(std::size_t n, double c) {
  detail::require_n_c(n, c);
  if (n == 1) return 1.0;
  if (c == 1.0) return 1.0 / static_cast<double>(n);

  const double nd = static_cast<double>(n);
  const double log_c = std::log(c);
  const double log_q = std::log1p(-c);
  const double lg_n1 = std::lgamma(nd + 1.0);
  auto log_pmf = [&](std::size_t kappa) {
    const double kd = static_cast<double>(kappa);
    return lg_n1 - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) + kd * log_c +
           (nd - kd) * log_q;
  };

  std::size_t mode = static_cast<std::size_t>(std::floor((nd + 1.0) * c));
  if (mode < 1) mode = 1;
  if (mode > n) mode = n;

  CompensatedSum acc;
  acc.add(std::exp(log_pmf(mode)) / static_cast<double>(mode));
  std::size_t lo = mode;
  std::size_t hi = mode;
  bool lo_done = (lo == 1);
  bool hi_done = (hi == n);
  constexpr double negligible = 1e-300;
  while (!lo_done || !hi_done) {
    if (!lo_done) {
      --lo;
      const double term = std::exp(log_pmf(lo)) / static_cast<double>(lo);
      acc.add(term);
      lo_done = (lo == 1) || term < negligible;
    }
    if (!hi_done) {
      ++hi;
      const double term = std::exp(log_pmf(hi)) / static_cast<double>(hi);
      acc.add(term);
      hi_done = (hi == n) || term < negligible;
    }
  }
  return acc.value() / rho(n, c);
}

/// Inputs shared by every closed form: n, c, v, theta, and kappa for the
/// exact-count regime.
struct MomentInputs {
  std::size_t n = 1;
  double c = 1.0;
  double v = 0.0;
  double theta = 0.0;
  std::optional<std::size_t> kappa;

  void validate() const {
    detail::require_n_c(n, c);
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("v must be finite and nonnegative");
    if (!std::isfinite(theta)) throw ConfigError("theta must be finite");
    if (kappa && (*kappa < 1 || *kappa > n)) throw ConfigError("kappa must lie in [1, n]");
  }
};

struct MomentReport {
  Regime regime = Regime::Unconditional;
  Estimator estimator = Estimator::IS;
  double mean = 0.0;
  double bias = 0.0;
  std::optional<double> variance;  // not available in the exact-count regime
  std::optional<double> mse;

  friend bool operator==(const MomentReport&, const MomentReport&) = default;
};

/// cρ(n-1) + ρ - cn; nonnegative for every n >= 1 and c in (0, 1].
inline double count_variance_margin(std::size_t n, double c) {
  const double r = rho(n, c);
  const double nd = static_cast<double>(n);
  return c * r * (nd - 1.0) + r - c * nd;
}

inline MomentReport moment_report(Estimator estimator, Regime regime, const MomentInputs& in) {
  in.validate();
  const bool exact = regime == Regime::ExactCount;
  if (exact != in.kappa.has_value()) {
    throw ConfigError(exact ? "the exact-count regime needs kappa"
                            : "kappa is only meaningful in the exact-count regime");
  }

  const double nd = static_cast<double>(in.n);
  const double c = in.c;
  const double theta = in.theta;
  const double theta2 = theta * theta;

  MomentReport out;
  out.regime = regime;
  out.estimator = estimator;

  if (exact) {
    out.mean = estimator == Estimator::IS
                   ? (static_cast<double>(*in.kappa) / (c * nd)) * theta
                   : theta;
    out.bias = out.mean - theta;
    return out;
  }

  const double r = rho(in.n, c);
  double variance = 0.0;
  if (estimator == Estimator::IS) {
    if (regime == Regime::Unconditional) {
      out.mean = theta;
      variance = (c * in.v + theta2 * (1.0 / c - 1.0)) / nd;
    } else {
      out.mean = theta / r;
      variance = in.v * c / (nd * r) + theta2 * count_variance_margin(in.n, c) / (c * nd * r * r);
    }
  } else {
    const double inv_k = binom_inv_moment(in.n, c);
    if (regime == Regime::Unconditional) {
      out.mean = r * theta;
      variance = r * c * c * in.v * inv_k + theta2 * r * (1.0 - r);
    } else {
      out.mean = theta;
      variance = c * c * in.v * inv_k;
    }
  }
  out.bias = out.mean - theta;
  out.variance = variance;
  out.mse = variance + out.bias * out.bias;
  return out;
}

/// Moments of the estimators run with a constant control variate t, where
/// `in.theta` is the true θ and `in.v` is the conditional variance of
/// w(x)(h(x) - t) given x in C.
///
/// IS and conditioned US estimate θ - t and add t back. Unconditional US
/// returns 0 (not t) when k = 0, so it is a mixture of 0 and the conditioned
/// estimator, which is the k = 0 convention's closed form with θ itself.
inline MomentReport moment_report_with_cv(Estimator estimator, Regime regime,
                                          const MomentInputs& in, double t) {
  if (estimator == Estimator::US && regime == Regime::Unconditional) {
    return moment_report(estimator, regime, in);
  }
  MomentInputs shifted = in;
  shifted.theta = in.theta - t;
  MomentReport out = moment_report(estimator, regime, shifted);
  out.mean += t;
  out.bias = out.mean - in.theta;
  if (out.variance) out.mse = *out.variance + out.bias * out.bias;
  return out;
}

/// True when c² E[1/κ | κ > 0] <= c / (nρ): US then has the lower variance
/// given k > 0, whatever θ is.
inline bool us_beats_is(std::size_t n, double c) {
  return c * c * binom_inv_moment(n, c) <= c / (static_cast<double>(n) * rho(n, c));
}

struct IllustrativeParams {
  double c = 1.0;
  double v = 1.0;
};

/// (c, v) for f uniform on [0, f_max], g uniform on [0, 2], C = F and
/// h = θ ∓ 1 on the two halves of F.
inline IllustrativeParams illustrative_params(double f_max, double /*theta*/ = 0.0) {
  if (!(f_max > 0.0 && f_max <= 2.0)) throw ConfigError("f_max must lie in (0, 2]");
  return {f_max / 2.0, 4.0 / (f_max * f_max)};
}

}  // namespace isus
