#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "regmean/errors.hpp"
#include "regmean/regular_mean.hpp"

using namespace regmean;

namespace {

const Generator kId = make_builtin(BuiltinKind::identity);
const Generator kLog = make_builtin(BuiltinKind::log);
const Generator kRec = make_builtin(BuiltinKind::reciprocal);
const Generator kSq = make_builtin(BuiltinKind::power, 2.0);
const Generator kExp = make_builtin(BuiltinKind::exp);

std::vector<double> positive_sample(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.1, 10.0);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST(RegularMean, Examples) {
  EXPECT_DOUBLE_EQ(mean(kId, Sample{1.0, 2.0, 3.0}), 2.0);
  EXPECT_NEAR(mean(kLog, Sample{2.0, 8.0}), 4.0, 1e-14);
  EXPECT_NEAR(mean(kRec, Sample{2.0, 6.0}), 3.0, 1e-14);
  for (const Generator& g : {kId, kLog, kRec, kSq, kExp}) {
    EXPECT_NEAR(mean(g, Sample{1.7, 1.7, 1.7, 1.7}), 1.7, 1e-15) << g.name();
    EXPECT_EQ(mean(g, Sample{2.5}), 2.5) << g.name();
  }
}

TEST(RegularMean, Errors) {
  EXPECT_THROW(mean(kLog, Sample{1.0, -1.0}), DomainError);
  EXPECT_THROW(Sample(std::vector<double>{}), InvalidParameter);
  EXPECT_THROW(Sample({1.0, std::nan("")}), DomainError);
  EXPECT_THROW(mean(kExp, Sample{800.0, 800.0}), NumericFailure);
  EXPECT_THROW(power_mean(2.0, Sample{1.0, 0.0}), DomainError);
}

TEST(RegularMean, PowerMeanExamples) {
  const Sample x{0.5, 3.0, 7.25};
  EXPECT_NEAR(power_mean(1.0, x), mean(kId, x), 1e-14);
  EXPECT_NEAR(power_mean(2.0, Sample{3.0, 4.0}), std::sqrt(12.5), 1e-14);
  EXPECT_NEAR(power_mean(0.0, Sample{2.0, 8.0}), 4.0, 1e-14);
  EXPECT_NEAR(power_mean(-1.0, Sample{2.0, 6.0}), 3.0, 1e-14);
  // Large exponents do not overflow.
  EXPECT_NEAR(power_mean(400.0, Sample{10.0, 10.0}), 10.0, 1e-12);
}

TEST(RegularMean, ExpMeanStableExamples) {
  EXPECT_NEAR(exp_mean_stable(Sample{0.3, 0.3}), 0.3, 1e-15);
  EXPECT_NEAR(exp_mean_stable(Sample{1000.0, 1000.0}), 1000.0, 1e-12);
  EXPECT_NEAR(exp_mean_stable(Sample{0.0, std::log(3.0)}), std::log(2.0), 1e-15);
}

TEST(RegularMeanProperty, Internality) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 500; ++t) {
    const auto x = positive_sample(rng, 1 + t % 9);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    for (const Generator& g : {kId, kLog, kRec, kSq, kExp}) {
      const double m = mean(g, x);
      EXPECT_GE(m, *lo * (1 - 1e-12));
      EXPECT_LE(m, *hi * (1 + 1e-12));
    }
  }
}

TEST(RegularMeanProperty, HarmonicGeometricArithmeticChain) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 500; ++t) {
    const auto x = positive_sample(rng, 2 + t % 7);
    const double hm = mean(kRec, x);
    const double gm = mean(kLog, x);
    const double am = mean(kId, x);
    EXPECT_LT(hm, gm);
    EXPECT_LT(gm, am);
  }
  const std::vector<double> c(5, 2.75);
  EXPECT_DOUBLE_EQ(mean(kRec, c), 2.75);
  EXPECT_DOUBLE_EQ(mean(kLog, c), 2.75);
  EXPECT_DOUBLE_EQ(mean(kId, c), 2.75);
}

TEST(RegularMeanProperty, PowerMeanMonotoneInP) {
  std::mt19937_64 rng(9);
  const std::vector<double> ps = {-5, -2, -1, -0.5, -0.01, 0, 0.01, 0.5, 1, 2, 5, 20};
  for (int t = 0; t < 300; ++t) {
    const auto x = positive_sample(rng, 2 + t % 6);
    double prev = -INFINITY;
    for (double p : ps) {
      const double m = power_mean(p, x);
      EXPECT_GE(m, prev * (1 - 1e-13)) << "p=" << p;
      prev = m;
    }
  }
}

TEST(RegularMeanProperty, PermutationInvariance) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    auto x = positive_sample(rng, 10);
    for (const Generator& g : {kId, kLog, kRec, kSq, kExp}) {
      const double m = mean(g, x);
      auto y = x;
      std::shuffle(y.begin(), y.end(), rng);
      EXPECT_LE(std::abs(mean(g, y) - m), 1e-12 * std::abs(m)) << g.name();
    }
  }
}

TEST(RegularMeanProperty, ExpStableAgreesWithNaive) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> x(1 + t % 12);
    for (double& v : x) v = u(rng);
    EXPECT_NEAR(exp_mean_stable(x), mean(kExp, x), 1e-10);
  }
}

TEST(RegularMeanProperty, ReplacementChainFixedPoint) {
  std::mt19937_64 rng(29);
  for (const Generator& g : {kId, kLog, kRec, kSq, kExp}) {
    auto x = positive_sample(rng, 6);
    const double m = mean(g, x);
    for (std::size_t n0 = 2; n0 <= x.size(); ++n0) {
      const double block = mean(g, std::span<const double>(x.data(), n0));
      std::fill(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n0), block);
      EXPECT_NEAR(mean(g, x), m, 1e-12 * std::max(1.0, std::abs(m))) << g.name();
    }
    for (double v : x) EXPECT_NEAR(v, m, 1e-12 * std::max(1.0, std::abs(m))) << g.name();
  }
}

TEST(RegularMeanProperty, AffineInvariance) {
  std::mt19937_64 rng(31);
  for (const Generator& g : {kId, kLog, kRec, kSq, kExp}) {
    const Generator a = affine(g, -2.5, 7.0);
    for (int t = 0; t < 100; ++t) {
      const auto x = positive_sample(rng, 5);
      EXPECT_NEAR(mean(a, x), mean(g, x), 1e-9) << g.name();
    }
  }
}

TEST(Axioms, Examples) {
  AxiomOptions o;
  o.n = 5;
  o.n0 = 3;
  o.trials = 1000;
  o.tol = 1e-9;
  o.seed = 1;
  const AxiomReport r = check_axioms(kLog, o);
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(r.trials, 1000u);

  o.n = 2;
  o.n0 = 2;
  EXPECT_TRUE(check_axioms(kId, o).all_pass());
  o.n = 10;
  o.n0 = 1;
  const AxiomReport e = check_axioms(kExp, o);
  EXPECT_TRUE(e.all_pass());
  EXPECT_EQ(e.a4_replacement.worst_violation, 0.0);
}

TEST(Axioms, BadOptions) {
  AxiomOptions o;
  o.n = 3;
  o.n0 = 4;
  EXPECT_THROW(check_axioms(kLog, o), InvalidParameter);
  o.n0 = 0;
  EXPECT_THROW(check_axioms(kLog, o), InvalidParameter);
  o.n0 = 1;
  o.trials = 0;
  EXPECT_THROW(check_axioms(kLog, o), InvalidParameter);
}

TEST(Axioms, NonMeanFails) {
  // A generator that is not monotone on the sampling box breaks A1.
  const Generator bad = Generator::custom(
      "square-on-reals", Domain::real_line(), Monotonicity::increasing,
      [](double x) { return x * x; }, [](double y) { return std::sqrt(std::max(y, 0.0)); },
      [](double x) { return 2.0 * x; });
  AxiomOptions o;
  o.n = 3;
  o.trials = 200;
  const AxiomReport r = check_axioms(bad, o);
  EXPECT_FALSE(r.a1_monotone.pass);
  EXPECT_GT(r.a1_monotone.failures, 0u);
}

TEST(Axioms, ReportInvariant) {
  AxiomOptions o;
  o.n = 4;
  o.n0 = 2;
  o.trials = 200;
  for (const Generator& g : {kId, kLog, kRec, kSq, kExp}) {
    const AxiomReport r = check_axioms(g, o);
    for (const AxiomCheck* c : {&r.a2_symmetric, &r.a3_idempotent, &r.a4_replacement}) {
      if (c->pass) EXPECT_LE(c->worst_violation, r.tolerance);
    }
  }
}
