#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "isus/bounds.hpp"
#include "isus/densities.hpp"
#include "isus/errors.hpp"
#include "isus/estimators.hpp"
#include "isus/moments.hpp"
#include "isus/numeric.hpp"
#include "isus/random.hpp"
#include "isus/stats.hpp"

namespace isus {

// ---------------------------------------------------------------------------
// Problem builders
// ---------------------------------------------------------------------------

/// f uniform on [0, f_max], g uniform on [0, 2], C = F, and
/// h(x) = θ - 1 for x < f_max / 2, θ + 1 otherwise. E_f[h] = θ.
inline EstimationProblem illustrative_problem(double f_max, double theta) {
  if (!(f_max > 0.0 && f_max <= 2.0)) throw ConfigError("f_max must lie in (0, 2]");
  Density target = PiecewiseUniform::uniform(0.0, f_max);
  Density sampling = PiecewiseUniform::uniform(0.0, 2.0);
  const double half = f_max / 2.0;
  EvaluationFunction h([half, theta](double x) { return x < half ? theta - 1.0 : theta + 1.0; },
                       IntervalSet{Interval{0.0, f_max}}, theta - 1.0, theta + 1.0);
  auto pruning = PruningSet::from_intervals(IntervalSet{Interval{0.0, f_max}}, sampling);
  return {std::move(target), std::move(sampling), std::move(h), std::move(pruning)};
}

/// The unmodified example generalized to F = [0, f_max]: h = 1 on F, θ = 1.
inline EstimationProblem indicator_problem(double f_max) {
  if (!(f_max > 0.0 && f_max <= 2.0)) throw ConfigError("f_max must lie in (0, 2]");
  Density target = PiecewiseUniform::uniform(0.0, f_max);
  Density sampling = PiecewiseUniform::uniform(0.0, 2.0);
  EvaluationFunction h([](double) { return 1.0; }, IntervalSet{Interval{0.0, f_max}}, 1.0, 1.0);
  auto pruning = PruningSet::from_intervals(IntervalSet{Interval{0.0, f_max}}, sampling);
  return {std::move(target), std::move(sampling), std::move(h), std::move(pruning)};
}

// ---------------------------------------------------------------------------
// Trial runner
// ---------------------------------------------------------------------------

/// Fills `out` with the n observations of one trial, drawing only from `stream`.
using TrialSampler = std::function<void(RandomStream& stream, std::vector<Observation>& out)>;

struct TrialRecord {
  EstimateResult is;
  EstimateResult us;
  EstimateResult wis;
};

struct RunOptions {
  std::uint64_t seed = 0;
  ControlVariate cv{};
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Runs `trials` independent batches. Trial i draws from the stream derived
/// from (seed, i), so the records do not depend on the thread count.
inline std::vector<TrialRecord> run_trial_records(const TrialSampler& sampler, double c,
                                                  std::size_t trials, const RunOptions& opts) {
  if (trials == 0) throw ConfigError("trials must be positive");
  if (!(c > 0.0 && c <= 1.0)) throw ConfigError("c must lie in (0, 1]");
  std::vector<TrialRecord> records(trials);

  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<Observation> obs;
    for (std::size_t i = begin; i < end; ++i) {
      auto stream = RandomStream::derive(opts.seed, i);
      obs.clear();
      sampler(stream, obs);
      records[i] = {is_estimate(obs, opts.cv), us_estimate(obs, c, opts.cv),
                    wis_estimate(obs, opts.cv)};
    }
  };

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));
  if (threads <= 1) {
    work(0, trials);
    return records;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (trials + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(trials, t * chunk);
    const std::size_t end = std::min(trials, begin + chunk);
    pool.emplace_back([&, t, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

/// Sampler drawing n points from the problem's sampling density.
/// Every batch is spot-checked for samples that violate the support
/// assumptions (see check_support and check_control_variate_support).
inline TrialSampler problem_sampler(const EstimationProblem& problem, std::size_t n,
                                    ControlVariate cv = {}) {
  if (n == 0) throw ConfigError("n must be positive");
  return [&problem, n, cv](RandomStream& stream, std::vector<Observation>& out) {
    const auto batch = draw(problem.sampling, stream, n);
    check_support(problem, batch);
    if (cv.t != 0.0) check_control_variate_support(problem, batch);
    out = observe(problem, batch);
  };
}

/// Empirical behaviour of one estimator over many trials.
struct TrialStats {
  std::string label;
  std::size_t trials = 0;
  Summary all;       // every trial, convention values included
  Summary positive;  // trials with k > 0
  double undefined_rate = 0.0;
  double se_undefined_rate = 0.0;

  friend bool operator==(const TrialStats& a, const TrialStats& b) {
    return a.label == b.label && a.trials == b.trials && a.all == b.all &&
           a.positive == b.positive && same_value(a.undefined_rate, b.undefined_rate) &&
           same_value(a.se_undefined_rate, b.se_undefined_rate);
  }
};

inline TrialStats summarize_trials(std::string label, const std::vector<TrialRecord>& records,
                                   EstimateResult TrialRecord::*which, double theta) {
  std::vector<double> all;
  std::vector<double> positive;
  all.reserve(records.size());
  std::size_t undefined = 0;
  for (const auto& r : records) {
    const auto& e = r.*which;
    all.push_back(e.value);
    if (e.k > 0) positive.push_back(e.value);
    if (!e.defined) ++undefined;
  }
  TrialStats s;
  s.label = std::move(label);
  s.trials = records.size();
  s.all = summarize(all, theta);
  s.positive = summarize(positive, theta);
  s.undefined_rate = static_cast<double>(undefined) / static_cast<double>(records.size());
  s.se_undefined_rate = binomial_se(s.undefined_rate, records.size());
  return s;
}

struct EstimatorStats {
  TrialStats is;
  TrialStats us;
  TrialStats wis;

  friend bool operator==(const EstimatorStats&, const EstimatorStats&) = default;
};

inline EstimatorStats summarize_all(const std::vector<TrialRecord>& records, double theta) {
  return {summarize_trials("IS", records, &TrialRecord::is, theta),
          summarize_trials("US", records, &TrialRecord::us, theta),
          summarize_trials("WIS", records, &TrialRecord::wis, theta)};
}

/// Statistics of IS, US and WIS over `trials` batches of size n, keyed by label.
inline std::map<std::string, TrialStats> run_trials(const EstimationProblem& problem,
                                                    std::size_t n, std::size_t trials,
                                                    double theta_true, ControlVariate cv,
                                                    std::uint64_t seed, unsigned threads = 0) {
  const auto records = run_trial_records(problem_sampler(problem, n, cv), problem.pruning.mass(),
                                         trials, {seed, cv, threads});
  auto stats = summarize_all(records, theta_true);
  return {{"IS", stats.is}, {"US", stats.us}, {"WIS", stats.wis}};
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Closed-form moments paired with empirical statistics for one grid point.
struct SweepRow {
  std::string coordinate_name;  // "f_max" or "cr_min"
  double coordinate = 0.0;
  double theta = 0.0;
  std::size_t n = 0;
  double c = 0.0;
  double v = 0.0;  // conditional variance of w (h - t) given C
  double t = 0.0;  // control variate
  MomentReport is_u, is_c, us_u, us_c;
  EstimatorStats empirical;
  double rho = 0.0;
  std::uint64_t seed = 0;
};


inline bool operator==(const SweepRow& a, const SweepRow& b) {
  return a.coordinate_name == b.coordinate_name && a.coordinate == b.coordinate &&
         a.theta == b.theta && a.n == b.n && a.c == b.c && a.v == b.v && a.t == b.t &&
         a.is_u == b.is_u && a.is_c == b.is_c && a.us_u == b.us_u && a.us_c == b.us_c &&
         a.empirical == b.empirical && a.rho == b.rho && a.seed == b.seed;
}

namespace detail {

inline void fill_analytic(SweepRow& row) {
  MomentInputs in{row.n, row.c, row.v, row.theta, std::nullopt};
  row.is_u = moment_report_with_cv(Estimator::IS, Regime::Unconditional, in, row.t);
  row.is_c = moment_report_with_cv(Estimator::IS, Regime::PositiveCount, in, row.t);
  row.us_u = moment_report_with_cv(Estimator::US, Regime::Unconditional, in, row.t);
  row.us_c = moment_report_with_cv(Estimator::US, Regime::PositiveCount, in, row.t);
  row.rho = rho(row.n, row.c);
}

}  // namespace detail

/// One row per (f_max, θ, n) of the illustrative family. Row i is seeded by
/// the stream derivation of (seed, i).
inline std::vector<SweepRow> sweep_illustrative(const std::vector<double>& f_max_grid,
                                                const std::vector<double>& theta_grid,
                                                const std::vector<std::size_t>& n_grid,
                                                std::size_t trials, std::uint64_t seed,
                                                unsigned threads = 0) {
  if (f_max_grid.empty() || theta_grid.empty() || n_grid.empty()) {
    throw ConfigError("sweep grids must be nonempty");
  }
  std::vector<SweepRow> rows;
  std::uint64_t index = 0;
  for (double f_max : f_max_grid) {
    for (double theta : theta_grid) {
      for (std::size_t n : n_grid) {
        const auto problem = illustrative_problem(f_max, theta);
        const auto params = illustrative_params(f_max, theta);
        SweepRow row;
        row.coordinate_name = "f_max";
        row.coordinate = f_max;
        row.theta = theta;
        row.n = n;
        row.c = params.c;
        row.v = params.v;
        row.seed = splitmix64(seed ^ splitmix64(index++));
        detail::fill_analytic(row);
        const auto records =
            run_trial_records(problem_sampler(problem, n), row.c, trials, {row.seed, {}, threads});
        row.empirical = summarize_all(records, theta);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

/// Default f_max grid {0.1, 0.2, ..., 2.0}.
inline std::vector<double> default_f_max_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(i / 10.0);
  return grid;
}

/// How a two-sided interval spends delta.
enum class DeltaSplit {
  PerSide,  // each side is a one-sided 1 - delta bound
  Halved,   // each side uses delta / 2, giving a two-sided 1 - delta interval
};

struct BoundsRow {
  double f_max = 0.0;
  std::size_t n = 0;
  double c = 0.0;
  double delta = 0.0;
  double theta = 1.0;
  double is_lower = 0.0;  // means over trials
  double is_upper = 0.0;
  double us_lower = 0.0;  // means over trials with k > 0
  double us_upper = 0.0;
  double is_lower_truncated = 0.0;  // clamped into the range of h, undefined US -> h range
  double is_upper_truncated = 0.0;
  double us_lower_truncated = 0.0;
  double us_upper_truncated = 0.0;
  std::size_t us_defined = 0;
  std::size_t trials = 0;
  double rho_empirical = 0.0;
  double rho_se = 0.0;
  double rho_analytic = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const BoundsRow& a, const BoundsRow& b) {
    return same_value(a.f_max, b.f_max) && a.n == b.n && same_value(a.c, b.c) &&
           same_value(a.delta, b.delta) && same_value(a.theta, b.theta) &&
           same_value(a.is_lower, b.is_lower) && same_value(a.is_upper, b.is_upper) &&
           same_value(a.us_lower, b.us_lower) && same_value(a.us_upper, b.us_upper) &&
           same_value(a.is_lower_truncated, b.is_lower_truncated) &&
           same_value(a.is_upper_truncated, b.is_upper_truncated) &&
           same_value(a.us_lower_truncated, b.us_lower_truncated) &&
           same_value(a.us_upper_truncated, b.us_upper_truncated) &&
           a.us_defined == b.us_defined && a.trials == b.trials &&
           same_value(a.rho_empirical, b.rho_empirical) && same_value(a.rho_se, b.rho_se) &&
           same_value(a.rho_analytic, b.rho_analytic) && a.seed == b.seed;
  }
};

/// Mean Hoeffding intervals of IS and US on the indicator example (h = 1 on
/// F = [0, f_max], θ = 1, b = 2 / f_max) for each n.
inline std::vector<BoundsRow> sweep_bounds(double f_max, const std::vector<std::size_t>& n_grid,
                                           double delta, std::size_t trials, std::uint64_t seed,
                                           DeltaSplit split = DeltaSplit::Halved,
                                           unsigned threads = 0) {
  if (n_grid.empty()) throw ConfigError("n grid must be nonempty");
  const auto problem = indicator_problem(f_max);
  const double c = problem.pruning.mass();
  const double b = weighted_range(*problem.target.as_piecewise_uniform(),
                                  *problem.sampling.as_piecewise_uniform(), problem.evaluation);
  const double h_lo = 0.0;
  const double h_hi = 1.0;
  const double side_delta = split == DeltaSplit::Halved ? delta / 2.0 : delta;

  std::vector<BoundsRow> rows;
  std::uint64_t index = 0;
  for (std::size_t n : n_grid) {
    BoundsRow row;
    row.f_max = f_max;
    row.n = n;
    row.c = c;
    row.delta = delta;
    row.trials = trials;
    row.seed = splitmix64(seed ^ splitmix64(index++));
    const auto records =
        run_trial_records(problem_sampler(problem, n), c, trials, {row.seed, {}, threads});

    CompensatedSum is_lo, is_hi, us_lo, us_hi, is_lo_t, is_hi_t, us_lo_t, us_hi_t;
    for (const auto& r : records) {
      BoundRequest req{r.is, b, c, n, side_delta, Side::Lower};
      const auto il = hoeffding_is(req);
      req.side = Side::Upper;
      const auto iu = hoeffding_is(req);
      BoundRequest ureq{r.us, b, c, n, side_delta, Side::Lower};
      const auto ul = hoeffding_us(ureq, r.us.k);
      ureq.side = Side::Upper;
      const auto uu = hoeffding_us(ureq, r.us.k);
      is_lo.add(il.value);
      is_hi.add(iu.value);
      is_lo_t.add(truncate_bound(il, h_lo, h_hi, Side::Lower).value);
      is_hi_t.add(truncate_bound(iu, h_lo, h_hi, Side::Upper).value);
      us_lo_t.add(truncate_bound(ul, h_lo, h_hi, Side::Lower).value);
      us_hi_t.add(truncate_bound(uu, h_lo, h_hi, Side::Upper).value);
      if (ul.defined) {
        ++row.us_defined;
        us_lo.add(ul.value);
        us_hi.add(uu.value);
      }
    }
    const double nt = static_cast<double>(trials);
    row.is_lower = is_lo.value() / nt;
    row.is_upper = is_hi.value() / nt;
    row.is_lower_truncated = is_lo_t.value() / nt;
    row.is_upper_truncated = is_hi_t.value() / nt;
    row.us_lower_truncated = us_lo_t.value() / nt;
    row.us_upper_truncated = us_hi_t.value() / nt;
    const double nd = static_cast<double>(row.us_defined);
    row.us_lower = row.us_defined ? us_lo.value() / nd : std::nan("");
    row.us_upper = row.us_defined ? us_hi.value() / nd : std::nan("");
    row.rho_empirical = nd / nt;
    row.rho_analytic = rho(n, c);
    row.rho_se = binomial_se(row.rho_analytic, trials);
    rows.push_back(row);
  }
  return rows;
}

struct CoverageRow {
  double f_max = 0.0;
  std::size_t n = 0;
  double c = 0.0;
  double delta = 0.0;
  double b = 0.0;
  std::size_t trials = 0;
  double is_coverage = 0.0;  // Pr(lower bound <= θ), all trials
  std::size_t us_defined = 0;
  double us_coverage = 0.0;  // among trials with k > 0
  double is_margin = 0.0;
  double us_mean_margin = 0.0;  // among trials with k > 0
  double mean_k = 0.0;          // among trials with k > 0
  double observed_ratio = 0.0;  // us_mean_margin / is_margin
  double predicted_ratio = 0.0;  // c sqrt(n / mean_k)
  std::uint64_t seed = 0;

  friend bool operator==(const CoverageRow& a, const CoverageRow& b) {
    return same_value(a.f_max, b.f_max) && a.n == b.n && same_value(a.c, b.c) &&
           same_value(a.delta, b.delta) && same_value(a.b, b.b) && a.trials == b.trials &&
           same_value(a.is_coverage, b.is_coverage) && a.us_defined == b.us_defined &&
           same_value(a.us_coverage, b.us_coverage) && same_value(a.is_margin, b.is_margin) &&
           same_value(a.us_mean_margin, b.us_mean_margin) && same_value(a.mean_k, b.mean_k) &&
           same_value(a.observed_ratio, b.observed_ratio) &&
           same_value(a.predicted_ratio, b.predicted_ratio) && a.seed == b.seed;
  }
};

/// One-sided lower-bound coverage of IS and US on the indicator example.
inline CoverageRow coverage(double f_max, std::size_t n, double delta, std::size_t trials,
                            std::uint64_t seed, unsigned threads = 0) {
  const auto problem = indicator_problem(f_max);
  const double theta = 1.0;
  CoverageRow row;
  row.f_max = f_max;
  row.n = n;
  row.c = problem.pruning.mass();
  row.delta = delta;
  row.b = weighted_range(*problem.target.as_piecewise_uniform(),
                         *problem.sampling.as_piecewise_uniform(), problem.evaluation);
  row.trials = trials;
  row.seed = seed;
  const auto records =
      run_trial_records(problem_sampler(problem, n), row.c, trials, {seed, {}, threads});

  std::size_t is_cover = 0, us_cover = 0;
  CompensatedSum us_margin, k_sum;
  for (const auto& r : records) {
    const auto il = hoeffding_is({r.is, row.b, row.c, n, delta, Side::Lower});
    if (il.value <= theta) ++is_cover;
    const auto ul = hoeffding_us({r.us, row.b, row.c, n, delta, Side::Lower}, r.us.k);
    if (!ul.defined) continue;
    ++row.us_defined;
    if (ul.value <= theta) ++us_cover;
    us_margin.add(r.us.value - ul.value);
    k_sum.add(static_cast<double>(r.us.k));
  }
  row.is_margin = hoeffding_margin(row.b, n, delta);
  row.is_coverage = static_cast<double>(is_cover) / static_cast<double>(trials);
  if (row.us_defined) {
    const double nd = static_cast<double>(row.us_defined);
    row.us_coverage = static_cast<double>(us_cover) / nd;
    row.us_mean_margin = us_margin.value() / nd;
    row.mean_k = k_sum.value() / nd;
    row.observed_ratio = row.is_margin > 0.0 ? row.us_mean_margin / row.is_margin : std::nan("");
    row.predicted_ratio = row.c * std::sqrt(static_cast<double>(n) / row.mean_k);
  } else {
    row.us_coverage = row.us_mean_margin = row.mean_k = std::nan("");
    row.observed_ratio = row.predicted_ratio = std::nan("");
  }
  return row;
}

// ---------------------------------------------------------------------------
// Treatment surrogate
// ---------------------------------------------------------------------------

/// Smooth stand-in for a daily return as a function of the treatment
/// parameters (CR, CF):
///
///   mu(CR, CF) = base + span (1 - ((11 - CR) / 2.5)^2) - cf_penalty ((CF - 12.5) / 2.5)^2
///
/// observed as mu + noise_sd * N(0, 1). The expected return rises toward
/// CR = 11, and over CR in [8.5, 11] the best and worst expected returns
/// differ by `span`.
struct SyntheticReturnSurface {
  double base = -0.12;
  double span = 0.06;
  double cf_penalty = 0.004;
  double noise_sd = 0.02;

  static constexpr double cr_lo = 8.5;
  static constexpr double cr_hi = 11.0;
  static constexpr double cf_lo = 10.0;
  static constexpr double cf_hi = 15.0;

  [[nodiscard]] double cr_component(double cr) const noexcept {
    const double u = (cr_hi - cr) / (cr_hi - cr_lo);
    return base + span * (1.0 - u * u);
  }

  [[nodiscard]] double expected(double cr, double cf) const noexcept {
    const double u = (cf - 12.5) / 2.5;
    return cr_component(cr) - cf_penalty * u * u;
  }

  /// E over CF ~ U[10, 15] of mu(cr, CF).
  [[nodiscard]] double mean_over_cf(double cr) const noexcept {
    return cr_component(cr) - cf_penalty / 3.0;
  }

  /// E over CF and noise of (return - t)^2.
  [[nodiscard]] double second_moment_over_cf(double cr, double t) const noexcept {
    const double a = cr_component(cr) - t;
    const double p = cf_penalty;
    return a * a - 2.0 * a * p / 3.0 + p * p / 5.0 + noise_sd * noise_sd;
  }

  double observe(double cr, RandomStream& stream) const {
    const double cf = cf_lo + stream.uniform01() * (cf_hi - cf_lo);
    return expected(cr, cf) + noise_sd * stream.normal();
  }
};

enum class CvMode { None, SamplingMean };

/// Ground truth for one CR_min setting, by Simpson quadrature.
struct TreatmentTruth {
  double c = 0.0;
  double theta = 0.0;
  double t = 0.0;
  double v = 0.0;
};

inline constexpr std::size_t kTreatmentQuadraturePanels = 100000;

inline TruncatedNormal treatment_target(double cr_min) {
  return TruncatedNormal(cr_min, SyntheticReturnSurface::cr_hi, SyntheticReturnSurface::cr_hi,
                         SyntheticReturnSurface::cr_hi - cr_min);
}

inline void validate_cr_min(double cr_min) {
  if (!(cr_min >= SyntheticReturnSurface::cr_lo && cr_min < SyntheticReturnSurface::cr_hi)) {
    throw ConfigError("cr_min must lie in [8.5, 11)");
  }
}

inline TreatmentTruth treatment_truth(double cr_min, CvMode mode,
                                      const SyntheticReturnSurface& surface) {
  validate_cr_min(cr_min);
  constexpr double lo = SyntheticReturnSurface::cr_lo;
  constexpr double hi = SyntheticReturnSurface::cr_hi;
  constexpr double g = 1.0 / (hi - lo);
  const auto target = treatment_target(cr_min);

  TreatmentTruth out;
  out.c = (hi - cr_min) / (hi - lo);
  out.theta = simpson([&](double cr) { return target.pdf(cr) * surface.mean_over_cf(cr); },
                      cr_min, hi, kTreatmentQuadraturePanels);
  if (mode == CvMode::SamplingMean) {
    out.t = simpson([&](double cr) { return g * surface.mean_over_cf(cr); }, lo, hi,
                    kTreatmentQuadraturePanels);
  }
  // E[(w (y - t))^2 | C] = (1/c) ∫_C f^2 / g E[(y - t)^2 | cr] dcr.
  const double second = simpson(
      [&](double cr) {
        const double f = target.pdf(cr);
        return f * f / g * surface.second_moment_over_cf(cr, out.t);
      },
      cr_min, hi, kTreatmentQuadraturePanels) / out.c;
  const double first = (out.theta - out.t) / out.c;
  out.v = second - first * first;
  return out;
}

/// Rows over CR_min: CR sampled uniformly on [8.5, 11], target the truncated
/// normal on [CR_min, 11] with mean 11 and stddev 11 - CR_min, C = [CR_min, 11].
/// CF has the same uniform marginal under both distributions and carries no
/// weight; it only adds variation to the observed return.
inline std::vector<SweepRow> sweep_treatment_surrogate(const std::vector<double>& cr_min_grid,
                                                       std::size_t n, std::size_t trials,
                                                       CvMode mode, std::uint64_t seed,
                                                       const SyntheticReturnSurface& surface = {},
                                                       unsigned threads = 0) {
  if (cr_min_grid.empty()) throw ConfigError("cr_min grid must be nonempty");
  for (double cr_min : cr_min_grid) validate_cr_min(cr_min);
  std::vector<SweepRow> rows;
  std::uint64_t index = 0;
  for (double cr_min : cr_min_grid) {
    const auto truth = treatment_truth(cr_min, mode, surface);
    const auto target = treatment_target(cr_min);
    constexpr double lo = SyntheticReturnSurface::cr_lo;
    constexpr double hi = SyntheticReturnSurface::cr_hi;
    const double g = 1.0 / (hi - lo);

    SweepRow row;
    row.coordinate_name = "cr_min";
    row.coordinate = cr_min;
    row.theta = truth.theta;
    row.n = n;
    row.c = truth.c;
    row.v = truth.v;
    row.t = truth.t;
    row.seed = splitmix64(seed ^ splitmix64(index++));
    detail::fill_analytic(row);

    TrialSampler sampler = [&](RandomStream& stream, std::vector<Observation>& out) {
      out.resize(n);
      for (auto& o : out) {
        const double cr = lo + stream.uniform01() * (hi - lo);
        const double y = surface.observe(cr, stream);
        o = {target.pdf(cr) / g, y, cr >= cr_min};
      }
    };
    const auto records =
        run_trial_records(sampler, row.c, trials, {row.seed, ControlVariate{row.t}, threads});
    row.empirical = summarize_all(records, row.theta);
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Default CR_min grid; c = (11 - CR_min) / 2.5 runs from 1 down to 0.1.
inline std::vector<double> default_cr_min_grid() {
  return {8.5, 9.0, 9.5, 10.0, 10.375, 10.5, 10.75};
}

}  // namespace isus
