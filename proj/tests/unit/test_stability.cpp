#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "regmean/errors.hpp"
#include "regmean/regular_mean.hpp"
#include "regmean/stability.hpp"

using namespace regmean;

namespace {

const Generator kId = make_builtin(BuiltinKind::identity);
const Generator kLog = make_builtin(BuiltinKind::log);
const Generator kRec = make_builtin(BuiltinKind::reciprocal);

// Brute-force sup over the full (unsorted) product grid on [lo, hi]^2.
double brute_sup_2d(const Generator& g, const Generator& h, double lo, double hi, int pts) {
  double d = 0.0;
  for (int i = 0; i < pts; ++i) {
    for (int j = 0; j < pts; ++j) {
      const std::vector<double> x = {lo + (hi - lo) * i / (pts - 1), lo + (hi - lo) * j / (pts - 1)};
      d = std::max(d, std::abs(mean(g, x) - mean(h, x)));
    }
  }
  return d;
}

}  // namespace

TEST(Stability, IdenticalGenerators) {
  const StabilityReport r = verify_stability(kLog, kLog, Interval(1.0, 2.0), 2);
  EXPECT_EQ(r.sup_mean_distance, 0.0);
  EXPECT_EQ(r.bound, 0.0);
  EXPECT_TRUE(r.satisfied);
  EXPECT_TRUE(r.exhaustive);
  EXPECT_FALSE(r.note.empty());
}

TEST(Stability, ShiftedIdentity) {
  const double c = 0.3;
  const Generator h = affine(kId, 1.0, c);
  const StabilityReport r = verify_stability(kId, h, Interval(1.0, 2.0), 2);
  EXPECT_NEAR(r.sup_mean_distance, 0.0, 1e-15);
  EXPECT_NEAR(r.bound, 2.0 * c, 1e-15);
  EXPECT_TRUE(r.satisfied);
}

TEST(Stability, LogVersusLinear) {
  const Generator lin = affine(kId, 1.0, -1.0);
  const StabilityBound b = stability_bound(kLog, lin, Interval(0.5, 2.0), 10001);
  // slopes: log' in [0.5, 2], 1 for x - 1
  EXPECT_NEAR(b.lipschitz_inverse, 2.0, 1e-12);
  EXPECT_NEAR(b.min_slope, 0.5, 1e-12);
  // |log x - (x - 1)| peaks at the right end: 1 - log 2
  EXPECT_NEAR(b.generator_distance, 1.0 - std::log(2.0), 1e-15);
  EXPECT_NEAR(b.bound, 4.0 * (1.0 - std::log(2.0)), 1e-12);
  const StabilityReport r = verify_stability(kLog, lin, Interval(0.5, 2.0), 2);
  EXPECT_NEAR(r.sup_mean_distance, brute_sup_2d(kLog, lin, 0.5, 2.0, 201), 1e-14);
  EXPECT_TRUE(r.satisfied);
}

TEST(Stability, PowerNeighbours) {
  const StabilityReport r = verify_stability(make_builtin(BuiltinKind::power, 1.0),
                                             make_builtin(BuiltinKind::power, 1.01),
                                             Interval(1.0, 2.0), 2);
  EXPECT_TRUE(r.satisfied);
  EXPECT_GT(r.sup_mean_distance, 0.0);
}

TEST(Stability, LogVersusFlippedReciprocal) {
  const StabilityReport r =
      verify_stability(kLog, increasing_form(kRec), Interval(1.0, 2.0), 2);
  EXPECT_TRUE(r.satisfied);
  // Decreasing generators are normalized internally, so the raw one gives the same report.
  const StabilityReport raw = verify_stability(kLog, kRec, Interval(1.0, 2.0), 2);
  EXPECT_EQ(raw.sup_mean_distance, r.sup_mean_distance);
  EXPECT_EQ(raw.bound, r.bound);
}

TEST(Stability, SortedTuplesMatchFullGrid) {
  const StabilityReport r = verify_stability(kLog, kId, Interval(1.0, 2.0), 2, {.grid_per_dim = 51});
  EXPECT_EQ(r.sup_mean_distance, brute_sup_2d(kLog, kId, 1.0, 2.0, 51));
  EXPECT_EQ(r.points, 51u * 52u / 2u);
}

TEST(Stability, MixedBoxAndRandomPoints) {
  const std::vector<Interval> box = {Interval(1.0, 2.0), Interval(1.5, 3.0)};
  const StabilityReport r = verify_stability(kLog, kId, box, {.grid_per_dim = 41});
  EXPECT_EQ(r.points, 41u * 41u);
  EXPECT_TRUE(r.satisfied);
  const StabilityReport big = verify_stability(kLog, kId, Interval(1.0, 2.0), 5, {.random_points = 5000});
  EXPECT_FALSE(big.exhaustive);
  EXPECT_EQ(big.points, 5000u);
  EXPECT_TRUE(big.satisfied);
}

TEST(Stability, Errors) {
  EXPECT_THROW(verify_stability(kLog, kId, Interval(-1.0, 2.0), 2), ConfigurationError);
  EXPECT_THROW(verify_stability(kLog, kId, Interval(1.0, 2.0), 0), InvalidParameter);
  const Generator cube = Generator::custom(
      "cube", Domain::real_line(), Monotonicity::increasing, [](double x) { return x * x * x; },
      [](double y) { return std::cbrt(y); }, [](double x) { return 3.0 * x * x; });
  EXPECT_THROW(stability_bound(cube, kId, Interval(-1.0, 1.0), 101), DegenerateError);
}

TEST(StabilityProperty, ConstantAsymmetry) {
  // L depends on the first generator only; m is symmetric.
  const StabilityBound ab = stability_bound(kLog, kId, Interval(1.0, 2.0));
  const StabilityBound ba = stability_bound(kId, kLog, Interval(1.0, 2.0));
  EXPECT_EQ(ab.min_slope, ba.min_slope);
  EXPECT_EQ(ab.generator_distance, ba.generator_distance);
  EXPECT_NEAR(ab.lipschitz_inverse, 2.0, 1e-12);
  EXPECT_NEAR(ba.lipschitz_inverse, 1.0, 1e-12);
  EXPECT_NE(ab.constant, ba.constant);
}

TEST(StabilityProperty, BlendDistanceShrinksWithT) {
  const Generator g = kLog;
  const Generator h = make_builtin(BuiltinKind::exp);
  double prev = -1.0;
  for (double t : {0.0, 0.1, 0.25, 0.5, 0.75, 1.0}) {
    const StabilityReport r = verify_stability(g, blend(g, h, t), Interval(1.0, 2.0), 2,
                                               {.grid_per_dim = 101});
    EXPECT_GE(r.sup_mean_distance, prev) << "t=" << t;
    EXPECT_TRUE(r.satisfied) << "t=" << t;
    prev = r.sup_mean_distance;
  }
}
