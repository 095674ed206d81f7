#include "regmean/regular_mean.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "regmean/errors.hpp"
#include "regmean/rng.hpp"

namespace regmean {
namespace {

void require_nonempty(std::span<const double> x) {
  if (x.empty()) throw InvalidParameter("a sample needs at least one value");
}

double clamp_to_sample(double m, std::span<const double> x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return std::clamp(m, *lo, *hi);
}

}  // namespace

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidParameter("a sample needs at least one value");
  for (double v : values_) {
    if (std::isnan(v)) throw DomainError("sample contains NaN");
  }
}

double Sample::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double Sample::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

double mean(const Generator& g, std::span<const double> x) {
  require_nonempty(x);
  CompensatedSum sum;
  for (double v : x) sum.add(g.forward(v));
  const double avg = sum.value() / static_cast<double>(x.size());
  if (!std::isfinite(avg)) {
    throw NumericFailure("sum of " + g.name() +
                         "(x_i) is not finite; use a stable variant for this generator");
  }
  return clamp_to_sample(g.inverse(avg), x);
}

double power_mean(double p, std::span<const double> x) {
  require_nonempty(x);
  if (!std::isfinite(p)) throw InvalidParameter("power mean exponent must be finite");
  for (double v : x) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("power mean needs positive finite values");
    }
  }
  const double n = static_cast<double>(x.size());
  if (p == 0.0) {
    CompensatedSum logs;
    for (double v : x) logs.add(std::log(v));
    return clamp_to_sample(std::exp(logs.value() / n), x);
  }
  double top = -std::numeric_limits<double>::infinity();
  for (double v : x) top = std::max(top, p * std::log(v));
  CompensatedSum scaled;
  for (double v : x) scaled.add(std::exp(p * std::log(v) - top));
  const double log_mean = top + std::log(scaled.value() / n);
  return clamp_to_sample(std::exp(log_mean / p), x);
}

double exp_mean_stable(std::span<const double> x) {
  require_nonempty(x);
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("exponential mean needs finite values");
  }
  const double top = *std::max_element(x.begin(), x.end());
  CompensatedSum scaled;
  for (double v : x) scaled.add(std::exp(v - top));
  return clamp_to_sample(top + std::log(scaled.value() / static_cast<double>(x.size())), x);
}

Interval default_axiom_box(const Generator& g) {
  const Domain& d = g.domain();
  if (d.lo == 0.0 && std::isinf(d.hi)) return Interval(0.5, 4.0);
  if (std::isinf(d.lo) && std::isinf(d.hi)) return Interval(-4.0, 4.0);
  if (std::isfinite(d.lo) && std::isfinite(d.hi)) {
    const double w = d.hi - d.lo;
    return Interval(d.lo + 0.1 * w, d.hi - 0.1 * w);
  }
  if (std::isfinite(d.lo)) return Interval(d.lo + 0.5, d.lo + 4.0);
  return Interval(d.hi - 4.0, d.hi - 0.5);
}

AxiomReport check_axioms(const Generator& g, const AxiomOptions& options) {
  const std::size_t n = options.n;
  if (n < 1) throw InvalidParameter("axiom check needs n >= 1");
  if (options.n0 < 1 || options.n0 > n) throw InvalidParameter("axiom check needs 1 <= n0 <= n");
  if (options.trials < 1) throw InvalidParameter("axiom check needs at least one trial");

  AxiomReport report;
  report.box = options.box.value_or(default_axiom_box(g));
  if (!g.domain().includes(report.box)) {
    throw DomainError("axiom box " + report.box.to_string() + " is outside the input range of '" +
                      g.name() + "'");
  }
  report.trials = options.trials;
  report.tolerance = options.tol;
  report.epsilon = 1e-4 * report.box.width();

  const auto record = [&](AxiomCheck& check, double violation, bool ok) {
    check.worst_violation = std::max(check.worst_violation, violation);
    if (!ok) {
      check.pass = false;
      ++check.failures;
    }
  };
  const auto relative = [](double diff, double ref) { return diff / std::max(1.0, std::abs(ref)); };

  RngStream rng(options.seed);
  std::vector<double> x(n), y(n);
  std::vector<std::size_t> perm(n);
  const double lo = report.box.lo();
  const double width = report.box.width();

  for (std::size_t t = 0; t < options.trials; ++t) {
    for (double& v : x) v = lo + width * rng.uniform();
    const double m = mean(g, x);

    // A1: strictly increasing in each coordinate.
    y = x;
    y[rng.index(n)] += report.epsilon;
    const double m_up = mean(g, y);
    record(report.a1_monotone, std::max(0.0, m - m_up), m_up > m);

    // A2: symmetric.
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[perm[i]];
    const double sym = relative(std::abs(mean(g, y) - m), m);
    record(report.a2_symmetric, sym, sym <= options.tol);

    // A3: mean of identical values.
    const double c = lo + width * rng.uniform();
    std::fill(y.begin(), y.end(), c);
    const double idem = relative(std::abs(mean(g, y) - c), c);
    record(report.a3_idempotent, idem, idem <= options.tol);

    // A4: replacing x_1..x_n0 by their own mean.
    const double block = mean(g, std::span<const double>(x).first(options.n0));
    y = x;
    std::fill(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(options.n0), block);
    const double repl = relative(std::abs(mean(g, y) - m), m);
    record(report.a4_replacement, repl, repl <= options.tol);
  }
  return report;
}

}  // namespace regmean
