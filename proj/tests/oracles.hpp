#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical routines.

#include <cmath>
#include <cstddef>

namespace isus::test {

/// Binomial pmf by direct products in long double.
inline long double binomial_pmf(std::size_t n, std::size_t k, long double p) {
  long double coef = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    coef *= static_cast<long double>(n - k + i) / static_cast<long double>(i);
  }
  return coef * std::pow(p, static_cast<long double>(k)) *
         std::pow(1.0L - p, static_cast<long double>(n - k));
}

/// E[1/k | k > 0] for k ~ B(n, p) by enumeration.
inline double inv_moment_enumerated(std::size_t n, double p) {
  long double num = 0.0L;
  long double positive = 0.0L;
  for (std::size_t k = 1; k <= n; ++k) {
    const long double w = binomial_pmf(n, k, p);
    num += w / static_cast<long double>(k);
    positive += w;
  }
  return static_cast<double>(num / positive);
}

/// 1 - (1 - p)^n by repeated multiplication.
inline double rho_naive(std::size_t n, double p) {
  long double q = 1.0L;
  for (std::size_t i = 0; i < n; ++i) q *= (1.0L - p);
  return static_cast<double>(1.0L - q);
}

/// Trapezoid rule with many panels.
template <class F>
double trapezoid(F&& f, double lo, double hi, std::size_t panels) {
  const double h = (hi - lo) / static_cast<double>(panels);
  long double acc = 0.5L * (f(lo) + f(hi));
  for (std::size_t i = 1; i < panels; ++i) acc += f(lo + h * static_cast<double>(i));
  return static_cast<double>(acc * h);
}

inline double normal_kernel(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z);
}

}  // namespace isus::test
