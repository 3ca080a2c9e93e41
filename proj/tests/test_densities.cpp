#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "isus/densities.hpp"
#include "isus/random.hpp"
#include "oracles.hpp"

namespace isus {
namespace {

TEST(IntervalSet, RejectsOverlap) {
  EXPECT_THROW(IntervalSet({Interval{0.0, 1.0}, Interval{0.5, 2.0}}), ConfigError);
  EXPECT_THROW(IntervalSet({Interval{1.0, 0.0}}), ConfigError);
  EXPECT_NO_THROW(IntervalSet({Interval{0.0, 1.0}, Interval{1.0, 2.0}}));
}

TEST(IntervalSet, ClosedEndpoints) {
  const IntervalSet s{Interval{0.0, 1.0}};
  EXPECT_TRUE(s.contains(0.0));
  EXPECT_TRUE(s.contains(1.0));
  EXPECT_FALSE(s.contains(std::nextafter(1.0, 2.0)));
}

TEST(PdfEval, Uniform) {
  const Density g = PiecewiseUniform::uniform(0.0, 2.0);
  EXPECT_DOUBLE_EQ(pdf_eval(g, 1.0), 0.5);
  const Density u = PiecewiseUniform::uniform(0.0, 1.0);
  EXPECT_EQ(pdf_eval(u, 1.5), 0.0);
  EXPECT_EQ(pdf_eval(u, -0.1), 0.0);
}

TEST(PdfEval, TruncatedNormalMatchesQuadratureOracle) {
  const Density f = TruncatedNormal(10.375, 11.0, 11.0, 0.625);
  const double normalizer = test::trapezoid(
      [](double x) { return test::normal_kernel(x, 11.0, 0.625); }, 10.375, 11.0, 200000);
  const double oracle = test::normal_kernel(11.0, 11.0, 0.625) / normalizer;
  EXPECT_NEAR(pdf_eval(f, 11.0), oracle, 1e-9);
  // Frozen high-precision value of the same quantity.
  EXPECT_NEAR(pdf_eval(f, 11.0), 1.869979415221813, 1e-12);
  EXPECT_EQ(pdf_eval(f, 10.0), 0.0);
}

TEST(PdfEval, SupportAgreesWithPositivePdf) {
  const Density pu = PiecewiseUniform({{{0.0, 1.0}, 0.25}, {{2.0, 3.0}, 0.0}, {{3.0, 5.0}, 0.75}});
  const Density tn = TruncatedNormal(-1.0, 2.0, 0.5, 1.3);
  for (const Density* d : {&pu, &tn}) {
    for (double x = -2.0; x <= 6.0; x += 0.01) {
      EXPECT_EQ(d->in_support(x), d->pdf(x) > 0.0) << "x = " << x;
    }
  }
}

TEST(IntervalMass, KnownValues) {
  const Density g = PiecewiseUniform::uniform(0.0, 2.0);
  EXPECT_DOUBLE_EQ(interval_mass(g, IntervalSet{Interval{0.0, 1.0}}), 0.5);
  EXPECT_DOUBLE_EQ(interval_mass(g, IntervalSet{Interval{0.0, 2.0}}), 1.0);
  const Density cr = PiecewiseUniform::uniform(8.5, 11.0);
  EXPECT_NEAR(interval_mass(cr, IntervalSet{Interval{10.375, 11.0}}), 0.25, 1e-12);
}

TEST(IntervalMass, FullSupportIntegratesToOne) {
  const auto pu = PiecewiseUniform({{{0.0, 1.0}, 3.0}, {{1.5, 2.0}, 1.0}, {{4.0, 7.0}, 2.0}});
  EXPECT_NEAR(Density(pu).mass(pu.support()), 1.0, 1e-12);
  for (auto [lo, hi, mean, sd] : {std::array{8.5, 11.0, 11.0, 2.5}, std::array{10.375, 11.0, 11.0, 0.625},
                                  std::array{-3.0, 4.0, 0.0, 1.0}, std::array{0.0, 1.0, 5.0, 0.5}}) {
    const TruncatedNormal tn(lo, hi, mean, sd);
    EXPECT_NEAR(Density(tn).mass(tn.support()), 1.0, 1e-12);
  }
}

TEST(IntervalMass, AdditiveOverDisjointIntervals) {
  const Density pu = PiecewiseUniform({{{0.0, 1.0}, 3.0}, {{1.5, 2.0}, 1.0}});
  const Density tn = TruncatedNormal(8.5, 11.0, 11.0, 1.0);
  RandomStream rs(11);
  for (int trial = 0; trial < 200; ++trial) {
    for (const Density* d : {&pu, &tn}) {
      double cuts[3] = {8.0 * rs.uniform01() + 0.0, 8.0 * rs.uniform01(), 12.0 * rs.uniform01()};
      std::sort(std::begin(cuts), std::end(cuts));
      const double a = d->mass(IntervalSet{Interval{cuts[0], cuts[1]}});
      const double b = d->mass(IntervalSet{Interval{cuts[1], cuts[2]}});
      const double both = d->mass(IntervalSet{Interval{cuts[0], cuts[1]}, Interval{cuts[1], cuts[2]}});
      const double whole = d->mass(IntervalSet{Interval{cuts[0], cuts[2]}});
      EXPECT_NEAR(a + b, both, 1e-12);
      EXPECT_NEAR(both, whole, 1e-12);
    }
  }
}

TEST(IntervalMass, CustomDensityHasNoAnalyticMass) {
  const Density custom = CustomDensity{[](double) { return 1.0; },
                                       [](RandomStream& s) { return s.uniform01(); },
                                       [](double x) { return x >= 0.0 && x <= 1.0; }};
  EXPECT_THROW(interval_mass(custom, IntervalSet{Interval{0.0, 0.5}}), ConfigError);
  EXPECT_EQ(custom.pdf(2.0), 0.0);
  EXPECT_THROW(Density(CustomDensity{}), ConfigError);
}

TEST(Draw, SupportContainmentAndDeterminism) {
  const Density g = PiecewiseUniform::uniform(0.0, 2.0);
  RandomStream a(123);
  RandomStream b(123);
  const auto x = draw(g, a, 1000);
  const auto y = draw(g, b, 1000);
  EXPECT_EQ(x.values, y.values);
  EXPECT_EQ(x.n(), 1000u);
  EXPECT_EQ(x.seed, 123u);
  EXPECT_TRUE(std::all_of(x.values.begin(), x.values.end(),
                          [](double v) { return v >= 0.0 && v <= 2.0; }));
  EXPECT_THROW(draw(g, a, 0), ConfigError);
}

TEST(Draw, UniformMeanWithinThreeStandardErrors) {
  const Density g = PiecewiseUniform::uniform(0.0, 2.0);
  RandomStream s(2024);
  const auto batch = draw(g, s, 1000000);
  const double mean = std::accumulate(batch.values.begin(), batch.values.end(), 0.0) / 1e6;
  const double se = (2.0 / std::sqrt(12.0)) / 1e3;
  EXPECT_NEAR(mean, 1.0, 3.0 * se);
}

TEST(Draw, TruncatedNormalFollowsItsCdf) {
  const TruncatedNormal tn(10.375, 11.0, 11.0, 0.625);
  const Density d = tn;
  RandomStream s(99);
  const auto batch = draw(d, s, 200000);
  for (double q : {10.5, 10.7, 10.9}) {
    const double p = tn.cdf(q);
    const double frac = static_cast<double>(std::count_if(batch.values.begin(), batch.values.end(),
                                                          [q](double v) { return v <= q; })) /
                        2e5;
    EXPECT_NEAR(frac, p, 4.0 * std::sqrt(p * (1 - p) / 2e5));
  }
  EXPECT_TRUE(std::all_of(batch.values.begin(), batch.values.end(),
                          [&](double v) { return tn.in_support(v); }));
}

TEST(Draw, PiecewiseMassesRespected) {
  const Density pu = PiecewiseUniform({{{0.0, 1.0}, 1.0}, {{5.0, 6.0}, 3.0}});
  RandomStream s(5);
  const auto batch = draw(pu, s, 100000);
  const auto high = std::count_if(batch.values.begin(), batch.values.end(),
                                  [](double v) { return v >= 5.0; });
  EXPECT_NEAR(static_cast<double>(high) / 1e5, 0.75, 4.0 * std::sqrt(0.75 * 0.25 / 1e5));
}

TEST(PruningSet, MassValidation) {
  const Density g = PiecewiseUniform::uniform(0.0, 2.0);
  EXPECT_THROW(PruningSet([](double) { return true; }, 0.0), ConfigError);
  EXPECT_THROW(PruningSet([](double) { return true; }, 1.5), ConfigError);
  const auto c = PruningSet::from_intervals(IntervalSet{Interval{0.0, 0.5}}, g);
  EXPECT_NEAR(c.mass(), 0.25, 1e-12);
  EXPECT_TRUE(c.contains(0.5));
  EXPECT_FALSE(c.contains(0.6));
}

TEST(EvaluationFunction, ZeroOutsideSupportAndRangeChecked) {
  EvaluationFunction h([](double x) { return x; }, IntervalSet{Interval{0.0, 1.0}}, 0.0, 1.0);
  EXPECT_EQ(h(5.0), 0.0);
  EXPECT_EQ(h(0.25), 0.25);
  EvaluationFunction bad([](double) { return 3.0; }, IntervalSet{Interval{0.0, 1.0}}, 0.0, 1.0);
  EXPECT_THROW(bad(0.5), MisconfigurationError);
  EXPECT_THROW(EvaluationFunction([](double) { return 0.0; }, {}, 1.0, 0.0), ConfigError);
}

TEST(TruncatedNormal, RejectsBadParameters) {
  EXPECT_THROW(TruncatedNormal(1.0, 0.0, 0.0, 1.0), ConfigError);
  EXPECT_THROW(TruncatedNormal(0.0, 1.0, 0.0, 0.0), ConfigError);
  EXPECT_THROW(TruncatedNormal(0.0, 1.0, 0.0, -1.0), ConfigError);
}

}  // namespace
}  // namespace isus
