#include "regmean/asymptotics.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "regmean/errors.hpp"
#include "regmean/regular_mean.hpp"

namespace regmean {
namespace {

// Central description of g(X) before the affine part of a builtin is applied.
struct Shape {
  double mean = 0.0;
  double var = 0.0;
  std::optional<double> skew;
  std::optional<double> exkurt;
};

[[noreturn]] void diverge(const Generator& g, const DistributionModel& dist, int order) {
  throw DivergenceError("moment of order " + std::to_string(order) + " of " + g.name() +
                            "(X) is infinite for X ~ " + dist.to_string(),
                        order);
}

void require_support_inside(const Generator& g, const DistributionModel& dist) {
  if (!g.domain().includes(dist.support())) {
    throw DomainError("support " + dist.support().to_string() + " of " + dist.to_string() +
                      " is not inside the input range " + g.domain().to_string() + " of '" +
                      g.name() + "'");
  }
}

Shape finish_shape(double mean, double var, double mu3, double mu4, int max_order) {
  Shape s;
  s.mean = mean;
  s.var = std::max(var, 0.0);
  if (max_order >= 4 && s.var > 0.0) {
    s.skew = mu3 / std::pow(s.var, 1.5);
    s.exkurt = mu4 / (s.var * s.var) - 3.0;
  }
  return s;
}

// Central moments from raw moments raw[1..4].
Shape from_raw(const std::array<double, 5>& raw, int max_order) {
  const double m = raw[1];
  const double var = max_order >= 2 ? raw[2] - m * m : 0.0;
  double mu3 = 0.0;
  double mu4 = 0.0;
  if (max_order >= 4) {
    mu3 = raw[3] - 3.0 * m * raw[2] + 2.0 * m * m * m;
    mu4 = raw[4] - 4.0 * m * raw[3] + 6.0 * m * m * raw[2] - 3.0 * m * m * m * m;
  }
  return finish_shape(m, var, mu3, mu4, max_order);
}

// Y = exp(N(m, s2)).
Shape lognormal_shape(double m, double s2, int max_order) {
  Shape s;
  s.mean = std::exp(m + 0.5 * s2);
  s.var = std::expm1(s2) * std::exp(2.0 * m + s2);
  if (max_order >= 4) {
    s.skew = (std::exp(s2) + 2.0) * std::sqrt(std::expm1(s2));
    s.exkurt = std::exp(4.0 * s2) + 2.0 * std::exp(3.0 * s2) + 3.0 * std::exp(2.0 * s2) - 6.0;
  }
  return s;
}

int orders_needed(int max_order) { return max_order >= 4 ? 4 : max_order; }

// E[(X^r)^k] for k = 1..K through the law's real-order moments.
Shape power_family_shape(const Generator& g, const DistributionModel& dist, double r,
                         int max_order) {
  std::array<double, 5> raw{1.0, 0.0, 0.0, 0.0, 0.0};
  for (int k = 1; k <= orders_needed(max_order); ++k) {
    const auto v = dist.moment_of_order(r * k);
    if (!v) diverge(g, dist, k);
    raw[static_cast<std::size_t>(k)] = *v;
  }
  return from_raw(raw, max_order);
}

// int (ln x)^k dx = x sum_{j=0}^{k} (-1)^{k-j} k!/j! (ln x)^j
double log_power_antiderivative(double x, int k) {
  const double lx = std::log(x);
  double sum = 0.0;
  double coeff = 1.0;  // k!/j! for j = k, k-1, ...
  double lpow = std::pow(lx, k);
  for (int j = k; j >= 0; --j) {
    const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * coeff * lpow;
    if (j > 0) {
      coeff *= j;
      lpow = std::pow(lx, j - 1);
    }
  }
  return x * sum;
}

std::optional<Shape> exact_shape(const Generator& g, const BuiltinForm& form,
                                 const DistributionModel& dist, int max_order) {
  const DistributionKind kind = dist.kind();
  const double p1 = dist.first();
  const double p2 = dist.second();
  switch (form.kind) {
    case BuiltinKind::identity:
      if (kind == DistributionKind::gamma) {
        Shape s{p1 / p2, p1 / (p2 * p2), {}, {}};
        if (max_order >= 4) {
          s.skew = 2.0 / std::sqrt(p1);
          s.exkurt = 6.0 / p1;
        }
        return s;
      }
      if (kind == DistributionKind::uniform) {
        const double w = p2 - p1;
        Shape s{0.5 * (p1 + p2), w * w / 12.0, {}, {}};
        if (max_order >= 4) {
          s.skew = 0.0;
          s.exkurt = -1.2;
        }
        return s;
      }
      if (kind == DistributionKind::lognormal) return lognormal_shape(p1, p2, max_order);
      return power_family_shape(g, dist, 1.0, max_order);
    case BuiltinKind::power:
    case BuiltinKind::reciprocal: {
      const double r = form.kind == BuiltinKind::power ? form.p : -1.0;
      if (kind == DistributionKind::lognormal) return lognormal_shape(r * p1, r * r * p2, max_order);
      return power_family_shape(g, dist, r, max_order);
    }
    case BuiltinKind::log:
      switch (kind) {
        case DistributionKind::lognormal: {
          Shape s{p1, p2, {}, {}};
          if (max_order >= 4) {
            s.skew = 0.0;
            s.exkurt = 0.0;
          }
          return s;
        }
        case DistributionKind::gamma: {
          namespace bm = boost::math;
          const double tri = bm::trigamma(p1);
          Shape s{bm::digamma(p1) - std::log(p2), tri, {}, {}};
          if (max_order >= 4) {
            s.skew = bm::polygamma(2, p1) / std::pow(tri, 1.5);
            s.exkurt = bm::polygamma(3, p1) / (tri * tri);
          }
          return s;
        }
        case DistributionKind::pareto: {
          // log(X / x_m) is exponential with rate alpha.
          Shape s{std::log(p2) + 1.0 / p1, 1.0 / (p1 * p1), {}, {}};
          if (max_order >= 4) {
            s.skew = 2.0;
            s.exkurt = 6.0;
          }
          return s;
        }
        case DistributionKind::uniform: {
          std::array<double, 5> raw{1.0, 0.0, 0.0, 0.0, 0.0};
          for (int k = 1; k <= orders_needed(max_order); ++k) {
            raw[static_cast<std::size_t>(k)] =
                (log_power_antiderivative(p2, k) - log_power_antiderivative(p1, k)) / (p2 - p1);
          }
          return from_raw(raw, max_order);
        }
        case DistributionKind::point_mass: return std::nullopt;
      }
      return std::nullopt;
    case BuiltinKind::exp: {
      std::array<double, 5> raw{1.0, 0.0, 0.0, 0.0, 0.0};
      for (int k = 1; k <= orders_needed(max_order); ++k) {
        const double kk = k;
        double v = 0.0;
        switch (kind) {
          case DistributionKind::uniform: {
            const double w = p2 - p1;
            v = std::exp(kk * p1) * std::expm1(kk * w) / (kk * w);
            break;
          }
          case DistributionKind::gamma:
            if (kk >= p2) diverge(g, dist, k);
            v = std::pow(1.0 - kk / p2, -p1);
            break;
          case DistributionKind::lognormal:
          case DistributionKind::pareto: diverge(g, dist, k);
          case DistributionKind::point_mass: return std::nullopt;
        }
        raw[static_cast<std::size_t>(k)] = v;
      }
      return from_raw(raw, max_order);
    }
  }
  return std::nullopt;
}

GMoments apply_affine(const Shape& s, const BuiltinForm& form) {
  GMoments m;
  m.mean_g = form.scale * s.mean + form.shift;
  m.var_g = form.scale * form.scale * s.var;
  if (s.skew) m.skew_g = form.scale > 0 ? *s.skew : -*s.skew;
  m.exkurt_g = s.exkurt;
  m.method = MomentMethod::closed_form;
  return m;
}

// ---- quadrature route -------------------------------------------------------

// Local power-law exponent of |g(Q(t))| as t -> 0 at one tail of the law.
// Returns +inf when g(Q(t)) is already infinite there.
double tail_exponent(const Generator& g, const DistributionModel& dist, bool upper) {
  static constexpr std::array<std::pair<double, double>, 3> kProbes = {
      {{1e-200, 1e-250}, {1e-100, 1e-120}, {1e-30, 1e-40}}};
  for (const auto& [t1, t2] : kProbes) {
    double x1 = 0.0;
    double x2 = 0.0;
    try {
      x1 = upper ? dist.upper_quantile(t1) : dist.quantile(t1);
      x2 = upper ? dist.upper_quantile(t2) : dist.quantile(t2);
    } catch (const std::exception&) {
      continue;
    }
    if (!g.domain().contains(x1) || !g.domain().contains(x2)) continue;
    const double g1 = std::abs(g(x1));
    const double g2 = std::abs(g(x2));
    if (!std::isfinite(g1) || !std::isfinite(g2)) return std::numeric_limits<double>::infinity();
    if (g1 == 0.0 || g2 == 0.0) return 0.0;
    return (std::log(g2) - std::log(g1)) / (std::log(t1) - std::log(t2));
  }
  return 0.0;
}

void check_tails(const Generator& g, const DistributionModel& dist, int order) {
  const DistributionKind kind = dist.kind();
  if (kind == DistributionKind::uniform || kind == DistributionKind::point_mass) return;
  for (bool upper : {false, true}) {
    const double beta = order * tail_exponent(g, dist, upper);
    if (beta >= 1.0 - 1e-6) diverge(g, dist, order);
  }
}

// E h(X) = int_0^1 h(Q(u)) du, split at 1/2 and substituted u = s^2 at each
// end to soften endpoint singularities.
double quantile_expectation(const std::function<double(double)>& h,
                            const DistributionModel& dist, const QuadratureOptions& options,
                            int order, const Generator& g) {
  const double edge = std::sqrt(0.5);
  const auto lower = [&](double s) {
    const double u = s * s;
    if (!(u > 0.0)) return 0.0;
    return 2.0 * s * h(dist.quantile(u));
  };
  const auto upper = [&](double s) {
    const double v = s * s;
    if (!(v > 0.0)) return 0.0;
    return 2.0 * s * h(dist.upper_quantile(v));
  };
  const QuadratureResult lo = integrate_gk21(lower, 0.0, edge, options);
  const QuadratureResult hi = integrate_gk21(upper, 0.0, edge, options);
  if (!lo.converged || !hi.converged) {
    throw NumericFailure("quadrature for the order-" + std::to_string(order) + " moment of " +
                         g.name() + "(X), X ~ " + dist.to_string() +
                         " did not converge (error estimate " +
                         std::to_string(lo.error + hi.error) + ")");
  }
  return lo.value + hi.value;
}

GMoments quadrature_moments(const Generator& g, const DistributionModel& dist,
                            const MomentOptions& options) {
  GMoments m;
  m.method = MomentMethod::quadrature;
  check_tails(g, dist, 1);
  m.mean_g = quantile_expectation([&g](double x) { return g(x); }, dist, options.quadrature, 1, g);
  if (options.max_order < 2) return m;
  const double c = m.mean_g;
  const auto central = [&](int k, double abs_tol) {
    check_tails(g, dist, k);
    QuadratureOptions q = options.quadrature;
    q.abs_tol = abs_tol;
    return quantile_expectation([&g, c, k](double x) { return std::pow(g(x) - c, k); }, dist, q,
                                k, g);
  };
  // abs_tol is meant for unit-scale integrands; rescale it by sd^k so small
  // central moments still get relative accuracy.
  const double rough = std::max(central(2, options.quadrature.abs_tol), 0.0);
  const double sd = std::sqrt(rough);
  const auto scaled_tol = [&](int k) {
    return sd > 0.0 ? options.quadrature.abs_tol * std::min(1.0, std::pow(sd, k))
                    : options.quadrature.abs_tol;
  };
  m.var_g = sd < 1.0 && sd > 0.0 ? std::max(central(2, scaled_tol(2)), 0.0) : rough;
  if (options.max_order >= 4 && m.var_g > 0.0) {
    const double mu3 = central(3, scaled_tol(3));
    const double mu4 = central(4, scaled_tol(4));
    m.skew_g = mu3 / std::pow(m.var_g, 1.5);
    m.exkurt_g = mu4 / (m.var_g * m.var_g) - 3.0;
  }
  return m;
}

GMoments monte_carlo_moments(const Generator& g, const DistributionModel& dist,
                             const MomentOptions& options) {
  if (options.monte_carlo_draws < 2) throw InvalidParameter("Monte Carlo needs >= 2 draws");
  RngStream rng(options.monte_carlo_seed);
  std::vector<double> values(options.monte_carlo_draws);
  for (double& v : values) {
    v = g(dist.draw(rng));
    if (!std::isfinite(v)) throw NumericFailure("non-finite g(X) in Monte Carlo moments");
  }
  CompensatedSum s1;
  for (double v : values) s1.add(v);
  const double n = static_cast<double>(values.size());
  const double mean = s1.value() / n;
  CompensatedSum s2, s3, s4;
  for (double v : values) {
    const double d = v - mean;
    s2.add(d * d);
    s3.add(d * d * d);
    s4.add(d * d * d * d);
  }
  const Shape s = finish_shape(mean, s2.value() / n, s3.value() / n, s4.value() / n,
                               options.max_order);
  GMoments m;
  m.mean_g = s.mean;
  m.var_g = options.max_order >= 2 ? s.var : 0.0;
  m.skew_g = s.skew;
  m.exkurt_g = s.exkurt;
  m.method = MomentMethod::monte_carlo;
  return m;
}

}  // namespace

std::string to_string(MomentMethod method) {
  switch (method) {
    case MomentMethod::automatic: return "automatic";
    case MomentMethod::closed_form: return "closed_form";
    case MomentMethod::quadrature: return "quadrature";
    case MomentMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

GMoments g_moments(const Generator& g, const DistributionModel& dist,
                   const MomentOptions& options) {
  if (options.max_order != 1 && options.max_order != 2 && options.max_order != 4) {
    throw InvalidParameter("max_order must be 1, 2 or 4");
  }
  require_support_inside(g, dist);

  if (dist.is_degenerate()) {
    GMoments m;
    m.mean_g = g(dist.first());
    m.method = options.method == MomentMethod::automatic ? MomentMethod::closed_form
                                                         : options.method;
    return m;
  }

  switch (options.method) {
    case MomentMethod::quadrature: return quadrature_moments(g, dist, options);
    case MomentMethod::monte_carlo: return monte_carlo_moments(g, dist, options);
    case MomentMethod::closed_form:
    case MomentMethod::automatic: {
      if (const auto& form = g.builtin()) {
        if (auto shape = exact_shape(g, *form, dist, options.max_order)) {
          return apply_affine(*shape, *form);
        }
      }
      if (options.method == MomentMethod::closed_form) {
        throw ConfigurationError("no closed form for the moments of " + g.name() + "(X), X ~ " +
                                 dist.to_string());
      }
      return quadrature_moments(g, dist, options);
    }
  }
  return {};
}

double kolmogorov_expectation(const Generator& g, const DistributionModel& dist,
                              MomentMethod method) {
  require_support_inside(g, dist);
  if (dist.is_degenerate()) return dist.first();
  MomentOptions options;
  options.method = method;
  options.max_order = 1;
  return g.inverse(g_moments(g, dist, options).mean_g);
}

AsymptoticSpec asymptotic_variance(const Generator& g, const DistributionModel& dist,
                                   MomentMethod method) {
  MomentOptions options;
  options.method = method;
  options.max_order = 2;
  const GMoments m = g_moments(g, dist, options);
  AsymptoticSpec spec;
  spec.eg = dist.is_degenerate() ? dist.first() : g.inverse(m.mean_g);
  spec.gprime_at_eg = g.derivative(spec.eg);
  if (!(spec.gprime_at_eg != 0.0) || !std::isfinite(spec.gprime_at_eg)) {
    throw DegenerateError("derivative of '" + g.name() + "' vanishes or is undefined at E_g(X) = " +
                          std::to_string(spec.eg));
  }
  spec.var_g = m.var_g;
  spec.asym_var = m.var_g / (spec.gprime_at_eg * spec.gprime_at_eg);
  return spec;
}

double standardize(const AsymptoticSpec& spec, double m_value, std::size_t n) {
  if (n < 1) throw InvalidParameter("standardize needs n >= 1");
  if (!(spec.asym_var > 0.0)) throw DegenerateError("asymptotic variance is zero");
  return std::sqrt(static_cast<double>(n)) * (m_value - spec.eg) / std::sqrt(spec.asym_var);
}

double scaled_error(const AsymptoticSpec& spec, double m_value, std::size_t n) {
  if (n < 1) throw InvalidParameter("scaled_error needs n >= 1");
  return std::sqrt(static_cast<double>(n)) * (m_value - spec.eg);
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double hermite(int k, double x) {
  const double x2 = x * x;
  switch (k) {
    case 1: return x2 - 1.0;
    case 2: return x * (x2 - 3.0);
    case 3: return x * (x2 * x2 - 10.0 * x2 + 15.0);
    default: throw InvalidParameter("hermite order must be 1, 2 or 3");
  }
}

EdgeworthTerms edgeworth_terms(double x, std::size_t n, const GMoments& mom,
                               EdgeworthVariant variant) {
  if (n < 1) throw InvalidParameter("Edgeworth expansion needs n >= 1");
  if (!mom.skew_g || !mom.exkurt_g) {
    throw DegenerateError("Edgeworth expansion needs the skewness and excess kurtosis of g(X)");
  }
  const double gamma = *mom.skew_g;
  const double kappa = *mom.exkurt_g;
  const double nn = static_cast<double>(n);
  const double density = normal_pdf(x);
  const double third = variant == EdgeworthVariant::classical ? gamma * gamma : kappa * kappa;
  EdgeworthTerms t;
  t.normal_cdf = normal_cdf(x);
  t.corrections[0] = density * gamma * hermite(1, x) / (6.0 * std::sqrt(nn));
  t.corrections[1] = density * kappa * hermite(2, x) / (24.0 * nn);
  t.corrections[2] = density * third * hermite(3, x) / (72.0 * nn);
  t.value = t.normal_cdf - t.corrections[0] - t.corrections[1] - t.corrections[2];
  return t;
}

double edgeworth_cdf(double x, std::size_t n, const GMoments& mom, EdgeworthVariant variant) {
  return edgeworth_terms(x, n, mom, variant).value;
}

double edgeworth_cdf_clamped(double x, std::size_t n, const GMoments& mom,
                             EdgeworthVariant variant) {
  return std::clamp(edgeworth_cdf(x, n, mom, variant), 0.0, 1.0);
}

}  // namespace regmean
