#include "regmean/distributions.hpp"

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/pareto.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "regmean/errors.hpp"
#include "regmean/format.hpp"

namespace regmean {
namespace {

namespace bm = boost::math;

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

bool finite(double v) { return std::isfinite(v); }

// Marsaglia-Tsang squeeze/rejection sampler for Gamma(shape, 1).
double standard_gamma(double shape, RngStream& rng) {
  if (shape < 1.0) {
    const double u = rng.uniform();
    return standard_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = rng.normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
  }
}

bool is_integer(double r) { return std::floor(r) == r; }

}  // namespace

DistributionModel DistributionModel::lognormal(double mu, double sigma2) {
  require(finite(mu) && finite(sigma2) && sigma2 > 0.0, "LogNormal needs finite mu and sigma^2 > 0");
  return {DistributionKind::lognormal, mu, sigma2};
}

DistributionModel DistributionModel::gamma(double shape, double rate) {
  require(finite(shape) && finite(rate) && shape > 0.0 && rate > 0.0,
          "Gamma needs shape > 0 and rate > 0");
  return {DistributionKind::gamma, shape, rate};
}

DistributionModel DistributionModel::uniform(double a, double b) {
  require(finite(a) && finite(b) && a < b, "Uniform needs finite a < b");
  return {DistributionKind::uniform, a, b};
}

DistributionModel DistributionModel::pareto(double alpha, double scale) {
  require(finite(alpha) && finite(scale) && alpha > 0.0 && scale > 0.0,
          "Pareto needs alpha > 0 and scale > 0");
  return {DistributionKind::pareto, alpha, scale};
}

DistributionModel DistributionModel::point_mass(double c) {
  require(finite(c), "point mass needs a finite location");
  return {DistributionKind::point_mass, c, 0.0};
}

Domain DistributionModel::support() const noexcept {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case DistributionKind::lognormal:
    case DistributionKind::gamma: return Domain::positive();
    case DistributionKind::uniform: return Domain::closed(p1_, p2_);
    case DistributionKind::pareto: return {p2_, inf, false, true};
    case DistributionKind::point_mass: return Domain::closed(p1_, p1_);
  }
  return {};
}

double DistributionModel::pdf(double x) const {
  switch (kind_) {
    case DistributionKind::lognormal:
      if (!(x > 0.0)) return 0.0;
      return bm::pdf(bm::lognormal_distribution<>(p1_, std::sqrt(p2_)), x);
    case DistributionKind::gamma:
      if (!(x > 0.0)) return 0.0;
      return bm::pdf(bm::gamma_distribution<>(p1_, 1.0 / p2_), x);
    case DistributionKind::uniform:
      return (x >= p1_ && x <= p2_) ? 1.0 / (p2_ - p1_) : 0.0;
    case DistributionKind::pareto:
      if (x < p2_) return 0.0;
      return p1_ * std::pow(p2_, p1_) / std::pow(x, p1_ + 1.0);
    case DistributionKind::point_mass:
      throw ConfigurationError("a point mass has no density");
  }
  return 0.0;
}

double DistributionModel::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf evaluated at NaN");
  switch (kind_) {
    case DistributionKind::lognormal:
      if (!(x > 0.0)) return 0.0;
      if (std::isinf(x)) return 1.0;
      return bm::cdf(bm::lognormal_distribution<>(p1_, std::sqrt(p2_)), x);
    case DistributionKind::gamma:
      if (!(x > 0.0)) return 0.0;
      if (std::isinf(x)) return 1.0;
      return bm::gamma_p(p1_, p2_ * x);
    case DistributionKind::uniform:
      if (x <= p1_) return 0.0;
      if (x >= p2_) return 1.0;
      return (x - p1_) / (p2_ - p1_);
    case DistributionKind::pareto:
      if (x <= p2_) return 0.0;
      return -std::expm1(p1_ * std::log(p2_ / x));
    case DistributionKind::point_mass: return x < p1_ ? 0.0 : 1.0;
  }
  return 0.0;
}

double DistributionModel::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("quantile needs u in (0, 1), got " + format_shortest(u));
  }
  switch (kind_) {
    case DistributionKind::lognormal:
      return bm::quantile(bm::lognormal_distribution<>(p1_, std::sqrt(p2_)), u);
    case DistributionKind::gamma: return bm::gamma_p_inv(p1_, u) / p2_;
    case DistributionKind::uniform: return p1_ + u * (p2_ - p1_);
    case DistributionKind::pareto: return p2_ * std::exp(-std::log1p(-u) / p1_);
    case DistributionKind::point_mass: return p1_;
  }
  return 0.0;
}

double DistributionModel::upper_quantile(double v) const {
  if (!(v > 0.0 && v < 1.0)) {
    throw DomainError("upper quantile needs v in (0, 1), got " + format_shortest(v));
  }
  switch (kind_) {
    case DistributionKind::lognormal:
      return bm::quantile(bm::complement(bm::lognormal_distribution<>(p1_, std::sqrt(p2_)), v));
    case DistributionKind::gamma: return bm::gamma_q_inv(p1_, v) / p2_;
    case DistributionKind::uniform: return p2_ - v * (p2_ - p1_);
    case DistributionKind::pareto: return p2_ * std::exp(-std::log(v) / p1_);
    case DistributionKind::point_mass: return p1_;
  }
  return 0.0;
}

double DistributionModel::draw(RngStream& rng) const {
  switch (kind_) {
    case DistributionKind::lognormal: return std::exp(p1_ + std::sqrt(p2_) * rng.normal());
    case DistributionKind::gamma: return standard_gamma(p1_, rng) / p2_;
    case DistributionKind::uniform: return p1_ + (p2_ - p1_) * rng.uniform();
    case DistributionKind::pareto: return p2_ * std::pow(rng.uniform(), -1.0 / p1_);
    case DistributionKind::point_mass: return p1_;
  }
  return 0.0;
}

std::optional<double> DistributionModel::raw_moment(int k) const {
  if (k < 1) throw InvalidParameter("raw moment order must be >= 1");
  return moment_of_order(static_cast<double>(k));
}

std::optional<double> DistributionModel::moment_of_order(double r) const {
  if (!std::isfinite(r)) throw InvalidParameter("moment order must be finite");
  if (r == 0.0) return 1.0;
  switch (kind_) {
    case DistributionKind::lognormal: return std::exp(r * p1_ + 0.5 * r * r * p2_);
    case DistributionKind::gamma:
      if (p1_ + r <= 0.0) return std::nullopt;
      return std::exp(std::lgamma(p1_ + r) - std::lgamma(p1_) - r * std::log(p2_));
    case DistributionKind::uniform: {
      const double a = p1_;
      const double b = p2_;
      if (a < 0.0 && !is_integer(r)) {
        throw DomainError("non-integer moment of a law with negative support");
      }
      if (a <= 0.0 && r <= -1.0) return std::nullopt;
      if (r == -1.0) return (std::log(b) - std::log(a)) / (b - a);
      return (std::pow(b, r + 1.0) - std::pow(a, r + 1.0)) / ((r + 1.0) * (b - a));
    }
    case DistributionKind::pareto:
      if (r >= p1_) return std::nullopt;
      return p1_ * std::pow(p2_, r) / (p1_ - r);
    case DistributionKind::point_mass:
      if (p1_ < 0.0 && !is_integer(r)) {
        throw DomainError("non-integer moment of a negative point mass");
      }
      if (p1_ == 0.0 && r < 0.0) return std::nullopt;
      return std::pow(p1_, r);
  }
  return std::nullopt;
}

std::string DistributionModel::to_string() const {
  switch (kind_) {
    case DistributionKind::lognormal:
      return "lognormal:" + format_shortest(p1_) + ":" + format_shortest(p2_);
    case DistributionKind::gamma:
      return "gamma:" + format_shortest(p1_) + ":" + format_shortest(p2_);
    case DistributionKind::uniform:
      return "uniform:" + format_shortest(p1_) + ":" + format_shortest(p2_);
    case DistributionKind::pareto:
      return "pareto:" + format_shortest(p1_) + ":" + format_shortest(p2_);
    case DistributionKind::point_mass: return "point:" + format_shortest(p1_);
  }
  return "unknown";
}

Sample sample(const DistributionModel& dist, std::size_t n, RngStream& rng) {
  if (n < 1) throw InvalidParameter("sample size must be >= 1");
  std::vector<double> values(n);
  sample_into(dist, values, rng);
  return Sample(std::move(values));
}

void sample_into(const DistributionModel& dist, std::span<double> out, RngStream& rng) {
  for (double& v : out) v = dist.draw(rng);
}

DistributionModel parse_distribution(std::string_view spec) {
  const auto fields = split_fields(spec, ":");
  if (fields.empty()) throw InvalidParameter("empty distribution spec");
  std::vector<double> args;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    double v = 0.0;
    if (!parse_double(fields[i], v)) {
      throw InvalidParameter("cannot parse number '" + std::string(fields[i]) +
                             "' in distribution spec '" + std::string(spec) + "'");
    }
    args.push_back(v);
  }
  const std::string_view name = fields[0];
  const auto arity = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      throw InvalidParameter("wrong number of parameters in distribution spec '" +
                             std::string(spec) + "'");
    }
  };
  if (name == "lognormal") {
    arity(2, 2);
    return DistributionModel::lognormal(args[0], args[1]);
  }
  if (name == "gamma") {
    arity(2, 2);
    return DistributionModel::gamma(args[0], args[1]);
  }
  if (name == "uniform") {
    arity(2, 2);
    return DistributionModel::uniform(args[0], args[1]);
  }
  if (name == "pareto") {
    arity(1, 2);
    return DistributionModel::pareto(args[0], args.size() == 2 ? args[1] : 1.0);
  }
  if (name == "point") {
    arity(1, 1);
    return DistributionModel::point_mass(args[0]);
  }
  throw InvalidParameter("unknown distribution '" + std::string(spec) + "'");
}

}  // namespace regmean
