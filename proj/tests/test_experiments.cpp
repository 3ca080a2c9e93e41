#include <gtest/gtest.h>

#include <cmath>

#include "isus/experiments.hpp"

namespace isus {
namespace {

TEST(RunTrials, OnDistributionMeansMatchTheta) {
  // f = g uniform on [0, 2], h(x) = x on [0, 2], θ = 1.
  Density f = PiecewiseUniform::uniform(0.0, 2.0);
  Density g = PiecewiseUniform::uniform(0.0, 2.0);
  EvaluationFunction h([](double x) { return x; }, IntervalSet{Interval{0.0, 2.0}}, 0.0, 2.0);
  auto c = PruningSet::from_intervals(IntervalSet{Interval{0.0, 2.0}}, g);
  const EstimationProblem p{std::move(f), std::move(g), std::move(h), std::move(c)};
  const auto stats = run_trials(p, 12, 20000, 1.0, {}, 5, 1);
  ASSERT_EQ(stats.size(), 3u);
  for (const auto& [label, s] : stats) {
    EXPECT_EQ(s.label, label);
    EXPECT_EQ(s.trials, 20000u);
    EXPECT_EQ(s.undefined_rate, 0.0);
    EXPECT_TRUE(within_se(s.all.mean, 1.0, s.all.se_mean)) << label << " " << s.all.mean;
  }
}

TEST(RunTrials, IllustrativeIsVarianceMatchesClosedForm) {
  const double theta = 3.0;
  const auto p = illustrative_problem(1.0, theta);
  const auto params = illustrative_params(1.0);
  const auto stats = run_trials(p, 10, 200000, theta, {}, 11, 1);
  const MomentInputs in{10, params.c, params.v, theta, std::nullopt};
  const double expected = *moment_report(Estimator::IS, Regime::Unconditional, in).variance;
  const auto& is = stats.at("IS");
  EXPECT_TRUE(within_se(is.all.variance, expected, is.all.se_variance))
      << is.all.variance << " vs " << expected;
}

TEST(RunTrials, DeterministicAndThreadIndependent) {
  const auto p = illustrative_problem(0.5, 10.0);
  const auto a = run_trials(p, 7, 3000, 10.0, {}, 99, 1);
  const auto b = run_trials(p, 7, 3000, 10.0, {}, 99, 1);
  const auto c = run_trials(p, 7, 3000, 10.0, {}, 99, 4);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  const auto d = run_trials(p, 7, 3000, 10.0, {}, 100, 1);
  EXPECT_NE(a.at("IS").all.mean, d.at("IS").all.mean);
}

TEST(RunTrials, UndefinedRateAndConditionalCounts) {
  const auto p = illustrative_problem(0.2, 1.0);
  const auto stats = run_trials(p, 5, 50000, 1.0, {}, 3, 1);
  const auto& us = stats.at("US");
  const double r = rho(5, 0.1);
  EXPECT_TRUE(within_se(us.undefined_rate, 1.0 - r, binomial_se(1.0 - r, 50000)));
  EXPECT_EQ(us.positive.count, static_cast<std::size_t>(std::llround((1.0 - us.undefined_rate) * 50000)));
  EXPECT_EQ(us.all.count, 50000u);
  EXPECT_EQ(stats.at("IS").undefined_rate, 0.0);
}

TEST(RunTrials, ErrorsPropagate) {
  const auto p = illustrative_problem(1.0, 0.0);
  EXPECT_THROW(run_trials(p, 5, 0, 0.0, {}, 1, 1), ConfigError);
  EXPECT_THROW(run_trials(p, 0, 10, 0.0, {}, 1, 1), ConfigError);

  // C misses half of F: every batch that hits [0.5, 1] raises.
  Density f = PiecewiseUniform::uniform(0.0, 1.0);
  Density g = PiecewiseUniform::uniform(0.0, 2.0);
  EvaluationFunction h([](double) { return 1.0; }, IntervalSet{Interval{0.0, 1.0}}, 1.0, 1.0);
  auto c = PruningSet::from_intervals(IntervalSet{Interval{0.0, 0.5}}, g);
  const EstimationProblem bad{std::move(f), std::move(g), std::move(h), std::move(c)};
  EXPECT_THROW(run_trials(bad, 50, 100, 0.5, {}, 1, 2), SupportViolationError);
}

TEST(SweepIllustrative, RowsAndAnalyticColumns) {
  const auto rows = sweep_illustrative({0.5, 2.0}, {0.0, 10.0}, {5, 10}, 500, 7, 1);
  ASSERT_EQ(rows.size(), 8u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.coordinate_name, "f_max");
    EXPECT_EQ(r.c, r.coordinate / 2.0);
    EXPECT_EQ(r.empirical.is.trials, 500u);
    if (r.coordinate == 2.0) {
      EXPECT_NEAR(*r.is_u.variance, *r.us_u.variance, 1e-12);
      EXPECT_NEAR(*r.is_c.variance, *r.us_c.variance, 1e-12);
      EXPECT_EQ(r.empirical.us.undefined_rate, 0.0);
    }
  }
  EXPECT_EQ(rows, sweep_illustrative({0.5, 2.0}, {0.0, 10.0}, {5, 10}, 500, 7, 3));
}

TEST(SweepIllustrative, ExceptionCaseAndLargeThetaGap) {
  const auto row = sweep_illustrative({1.0}, {0.0}, {10}, 10, 1, 1).front();
  EXPECT_LT(*row.is_c.variance, *row.us_c.variance);
  const auto big = sweep_illustrative({0.1}, {10.0}, {50}, 10, 1, 1).front();
  EXPECT_LT(*big.us_c.variance * 10.0, *big.is_c.variance);
}

TEST(SweepIllustrative, Validation) {
  EXPECT_THROW(sweep_illustrative({}, {0.0}, {5}, 10, 1), ConfigError);
  EXPECT_THROW(sweep_illustrative({2.5}, {0.0}, {5}, 10, 1), ConfigError);
  EXPECT_EQ(default_f_max_grid().size(), 20u);
  EXPECT_NEAR(default_f_max_grid().front(), 0.1, 1e-15);
  EXPECT_NEAR(default_f_max_grid().back(), 2.0, 1e-15);
}

TEST(SweepBounds, UsNarrowerAndRhoColumn) {
  const auto rows = sweep_bounds(0.5, {5, 20, 100}, 0.1, 4000, 21, DeltaSplit::Halved, 1);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.c, 0.25);
    EXPECT_LT(r.us_upper - r.us_lower, r.is_upper - r.is_lower);
    EXPECT_TRUE(within_se(r.rho_empirical, r.rho_analytic, r.rho_se));
    EXPECT_LE(r.is_upper_truncated, 1.0);
    EXPECT_GE(r.us_lower_truncated, 0.0);
  }
}

TEST(SweepBounds, DeltaOneCollapsesToPointEstimates) {
  const auto rows = sweep_bounds(0.5, {10}, 1.0, 2000, 4, DeltaSplit::PerSide, 1);
  const auto& r = rows.front();
  EXPECT_EQ(r.is_lower, r.is_upper);
  EXPECT_EQ(r.us_lower, r.us_upper);
  EXPECT_NEAR(r.us_lower, 1.0, 1e-12);
}

TEST(Coverage, SmallRun) {
  const auto row = coverage(1.0, 10, 0.1, 3000, 8, 1);
  EXPECT_EQ(row.b, 2.0);
  EXPECT_GE(row.is_coverage, 0.89);
  EXPECT_GE(row.us_coverage, 0.89);
  EXPECT_LE(row.us_mean_margin, row.is_margin);
  EXPECT_GT(row.us_defined, 2900u);
}

TEST(Treatment, TruthValues) {
  const SyntheticReturnSurface surface;
  const auto full = treatment_truth(8.5, CvMode::None, surface);
  EXPECT_NEAR(full.c, 1.0, 1e-15);
  const auto quarter = treatment_truth(10.375, CvMode::None, surface);
  EXPECT_NEAR(quarter.c, 0.25, 1e-15);
  EXPECT_EQ(quarter.t, 0.0);
  EXPECT_GT(quarter.v, 0.0);
  // The target concentrates near CR = 11, so θ rises with CR_min.
  EXPECT_GT(quarter.theta, full.theta);
  const auto cv = treatment_truth(10.375, CvMode::SamplingMean, surface);
  // Mean of mu over CR ~ U[8.5, 11]: base + span (1 - 1/3) - p/3.
  EXPECT_NEAR(cv.t, -0.12 + 0.06 * 2.0 / 3.0 - 0.004 / 3.0, 1e-12);
  EXPECT_NEAR(cv.theta, quarter.theta, 1e-15);
}

TEST(Treatment, FullSupportRowHasIdenticalAnalyticColumns) {
  const auto rows = sweep_treatment_surrogate({8.5}, 30, 200, CvMode::None, 3, {}, 1);
  const auto& r = rows.front();
  EXPECT_NEAR(*r.is_u.variance, *r.us_u.variance, 1e-15);
  EXPECT_NEAR(*r.is_c.variance, *r.us_c.variance, 1e-15);
}

TEST(Treatment, EmpiricalMatchesQuadrature) {
  const auto rows = sweep_treatment_surrogate({10.375}, 30, 40000, CvMode::None, 12, {}, 1);
  const auto& r = rows.front();
  EXPECT_TRUE(within_se(r.empirical.is.all.mean, r.theta, r.empirical.is.all.se_mean));
  EXPECT_TRUE(within_se(r.empirical.is.all.variance, *r.is_u.variance,
                        r.empirical.is.all.se_variance));
  EXPECT_TRUE(within_se(r.empirical.us.positive.variance, *r.us_c.variance,
                        r.empirical.us.positive.se_variance));
}

TEST(Treatment, Validation) {
  EXPECT_THROW(sweep_treatment_surrogate({8.0}, 30, 10, CvMode::None, 1), ConfigError);
  EXPECT_THROW(sweep_treatment_surrogate({11.0}, 30, 10, CvMode::None, 1), ConfigError);
  EXPECT_THROW(sweep_treatment_surrogate({}, 30, 10, CvMode::None, 1), ConfigError);
}

}  // namespace
}  // namespace isus
