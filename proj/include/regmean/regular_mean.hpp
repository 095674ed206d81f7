#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "regmean/generator.hpp"

namespace regmean {

/// Observations x_1, ..., x_n with n >= 1.
class Sample {
 public:
  explicit Sample(std::vector<double> values);
  Sample(std::initializer_list<double> values) : Sample(std::vector<double>(values)) {}

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double min() const noexcept;
  double max() const noexcept;

 private:
  std::vector<double> values_;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Regular mean g^{-1}((1/n) sum g(x_i)), clamped to [min x, max x].
///
/// Throws DomainError if any x_i is outside the input range of g and
/// NumericFailure if the accumulated sum of g(x_i) is not finite.
double mean(const Generator& g, std::span<const double> x);
inline double mean(const Generator& g, const Sample& x) { return mean(g, x.values()); }

/// Power mean {(1/n) sum x_i^p}^{1/p}, evaluated in log space. p = 0 gives
/// the geometric mean. All x_i must be positive.
double power_mean(double p, std::span<const double> x);
inline double power_mean(double p, const Sample& x) { return power_mean(p, x.values()); }

/// log((1/n) sum exp(x_i)) via the shifted-maximum form.
double exp_mean_stable(std::span<const double> x);
inline double exp_mean_stable(const Sample& x) { return exp_mean_stable(x.values()); }

struct AxiomCheck {
  bool pass = true;
  double worst_violation = 0.0;
  std::size_t failures = 0;
};

/// Outcome of the randomized A1-A4 checks.
///
/// A1 is checked as a strict increase of the mean when one coordinate moves
/// up by epsilon; its worst_violation is max(0, M(x) - M(x + eps e_i)). The
/// other checks record the largest |difference| relative to max(1, |M|).
struct AxiomReport {
  AxiomCheck a1_monotone;
  AxiomCheck a2_symmetric;
  AxiomCheck a3_idempotent;
  AxiomCheck a4_replacement;
  std::size_t trials = 0;
  double tolerance = 0.0;
  double epsilon = 0.0;
  Interval box{0.0, 1.0};

  bool all_pass() const noexcept {
    return a1_monotone.pass && a2_symmetric.pass && a3_idempotent.pass && a4_replacement.pass;
  }
};

/// Default compact sampling box inside a generator's input range:
/// [0.5, 4] for ranges bounded below at 0, [-4, 4] on the real line.
Interval default_axiom_box(const Generator& g);

struct AxiomOptions {
  std::size_t n = 5;
  std::size_t n0 = 1;
  std::size_t trials = 1000;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  std::optional<Interval> box;  // defaults to default_axiom_box(g)
};

AxiomReport check_axioms(const Generator& g, const AxiomOptions& options);

}  // namespace regmean
