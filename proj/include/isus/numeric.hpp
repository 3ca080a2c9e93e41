#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace isus {

/// Running sum with Neumaier's compensation term.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Equality that treats two NaNs as equal; used for structural comparison of
/// result rows whose undefined statistics are NaN.
inline bool same_value(double a, double b) noexcept {
  return a == b || (std::isnan(a) && std::isnan(b));
}

inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

/// Composite Simpson rule on [lo, hi] with `panels` panels (rounded up to even).
template <class F>
double simpson(F&& fn, double lo, double hi, std::size_t panels) {
  if (panels == 0) throw std::invalid_argument("simpson: panels must be positive");
  if (panels % 2 != 0) ++panels;
  if (hi == lo) return 0.0;
  const double step = (hi - lo) / static_cast<double>(panels);
  CompensatedSum acc;
  acc.add(fn(lo));
  acc.add(fn(hi));
  for (std::size_t i = 1; i < panels; ++i) {
    const double x = lo + step * static_cast<double>(i);
    acc.add((i % 2 == 1 ? 4.0 : 2.0) * fn(x));
  }
  return acc.value() * step / 3.0;
}

}  // namespace isus
