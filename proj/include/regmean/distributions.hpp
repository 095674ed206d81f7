#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "regmean/interval.hpp"
#include "regmean/regular_mean.hpp"
#include "regmean/rng.hpp"

namespace regmean {

enum class DistributionKind { lognormal, gamma, uniform, pareto, point_mass };

/// One of the simulation laws, with sampling, density, distribution and
/// quantile functions and raw moments.
///
/// Parameterizations: LogNormal(mu, sigma^2) of log X; Gamma(shape a, rate b);
/// Uniform(a, b); Pareto(alpha, scale x_m) with support [x_m, inf). A point
/// mass is included for degenerate checks.
class DistributionModel {
 public:
  static DistributionModel lognormal(double mu, double sigma2);
  static DistributionModel gamma(double shape, double rate);
  static DistributionModel uniform(double a, double b);
  static DistributionModel pareto(double alpha, double scale = 1.0);
  static DistributionModel point_mass(double c);

  DistributionKind kind() const noexcept { return kind_; }
  /// First and second parameter in the order listed above (second is 0 for a
  /// point mass).
  double first() const noexcept { return p1_; }
  double second() const noexcept { return p2_; }

  Domain support() const noexcept;
  bool is_degenerate() const noexcept { return kind_ == DistributionKind::point_mass; }

  double pdf(double x) const;
  double cdf(double x) const;
  /// Inverse CDF for u in (0, 1). Throws DomainError otherwise.
  double quantile(double u) const;
  /// quantile(1 - v), evaluated without forming 1 - v.
  double upper_quantile(double v) const;

  double draw(RngStream& rng) const;

  /// E(X^k), k >= 1. std::nullopt when the moment is infinite.
  std::optional<double> raw_moment(int k) const;
  /// E(X^r) for real r; std::nullopt when infinite.
  std::optional<double> moment_of_order(double r) const;

  /// Canonical spec string, e.g. "lognormal:2:1" or "pareto:10:1".
  std::string to_string() const;

  friend bool operator==(const DistributionModel&, const DistributionModel&) = default;

 private:
  DistributionModel(DistributionKind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}

  DistributionKind kind_;
  double p1_;
  double p2_;
};

/// n i.i.d. draws.
Sample sample(const DistributionModel& dist, std::size_t n, RngStream& rng);

/// Fills `out` with i.i.d. draws (no allocation).
void sample_into(const DistributionModel& dist, std::span<double> out, RngStream& rng);

/// Parses "lognormal:<mu>:<sigma2>", "gamma:<shape>:<rate>", "uniform:<a>:<b>",
/// "pareto:<alpha>[:<scale>]" or "point:<c>".
DistributionModel parse_distribution(std::string_view spec);

}  // namespace regmean
