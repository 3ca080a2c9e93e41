#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "isus/numeric.hpp"

namespace isus {

/// Sample mean, variance and mean-squared error about a reference value, each
/// with its Monte Carlo standard error.
struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double mse = 0.0;       // mean of (x - reference)^2
  double se_mean = 0.0;
  double se_variance = 0.0;
  double se_mse = 0.0;

  friend bool operator==(const Summary& a, const Summary& b) {
    return a.count == b.count && same_value(a.mean, b.mean) &&
           same_value(a.variance, b.variance) && same_value(a.mse, b.mse) &&
           same_value(a.se_mean, b.se_mean) && same_value(a.se_variance, b.se_variance) &&
           same_value(a.se_mse, b.se_mse);
  }
};

/// Two-pass summary. Empty input yields NaN statistics; a single value yields
/// zero variance and NaN standard errors for it.
inline Summary summarize(std::span<const double> xs, double reference) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) {
    const double nan = std::nan("");
    s.mean = s.variance = s.mse = s.se_mean = s.se_variance = s.se_mse = nan;
    return s;
  }
  const double n = static_cast<double>(xs.size());

  CompensatedSum sum;
  for (double x : xs) sum.add(x);
  s.mean = sum.value() / n;

  CompensatedSum m2, m4, e2, e4;
  for (double x : xs) {
    const double d = x - s.mean;
    const double d2 = d * d;
    m2.add(d2);
    m4.add(d2 * d2);
    const double e = x - reference;
    e2.add(e * e);
  }
  const double mse = e2.value() / n;
  for (double x : xs) {
    const double e = x - reference;
    const double de = e * e - mse;
    e4.add(de * de);
  }
  s.mse = mse;

  if (xs.size() < 2) {
    const double nan = std::nan("");
    s.variance = 0.0;
    s.se_mean = s.se_variance = s.se_mse = nan;
    return s;
  }
  const double pop_var = m2.value() / n;
  s.variance = m2.value() / (n - 1.0);
  s.se_mean = std::sqrt(s.variance / n);
  const double fourth = m4.value() / n;
  s.se_variance = std::sqrt(std::max(fourth - pop_var * pop_var, 0.0) / n);
  s.se_mse = std::sqrt(e4.value() / (n - 1.0) / n);
  return s;
}

/// Standard error of an empirical proportion p over `count` trials, using the
/// hypothesized p.
inline double binomial_se(double p, std::size_t count) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(count));
}

/// |observed - expected| <= k * se, with a small absolute slack for the
/// degenerate zero-variance case.
inline bool within_se(double observed, double expected, double se, double k = 3.0) {
  const double slack = 1e-12 * std::max(1.0, std::abs(expected));
  return std::abs(observed - expected) <= k * se + slack;
}

}  // namespace isus
