#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "regmean/distributions.hpp"
#include "regmean/generator.hpp"
#include "regmean/quadrature.hpp"

namespace regmean {

enum class MomentMethod { automatic, closed_form, quadrature, monte_carlo };

std::string to_string(MomentMethod method);

/// Mean, variance, skewness and excess kurtosis of g(X).
///
/// The shape fields are empty when they were not requested or when g(X) is
/// degenerate (zero variance).
struct GMoments {
  double mean_g = 0.0;
  double var_g = 0.0;
  std::optional<double> skew_g;
  std::optional<double> exkurt_g;
  MomentMethod method = MomentMethod::automatic;
};

struct MomentOptions {
  MomentMethod method = MomentMethod::automatic;
  int max_order = 4;  // 1, 2 or 4
  QuadratureOptions quadrature{};
  std::size_t monte_carlo_draws = 1'000'000;
  std::uint64_t monte_carlo_seed = 42;
};

/// Moments of g(X), X ~ dist.
///
/// `automatic` uses exact formulas where the (generator, law) pair has one and
/// falls back to quadrature of g(Q(u))^k over u in (0, 1), Q the quantile
/// function. Throws DomainError if the support of the law leaves the input
/// range of g, DivergenceError (carrying the order) for infinite moments and
/// NumericFailure if quadrature does not converge.
GMoments g_moments(const Generator& g, const DistributionModel& dist,
                   const MomentOptions& options = {});

/// E_g(X) = g^{-1}(E g(X)).
double kolmogorov_expectation(const Generator& g, const DistributionModel& dist,
                              MomentMethod method = MomentMethod::automatic);

struct AsymptoticSpec {
  double eg = 0.0;            // E_g(X)
  double gprime_at_eg = 0.0;  // g'(E_g(X))
  double var_g = 0.0;         // var g(X)
  double asym_var = 0.0;      // var g(X) / g'(E_g(X))^2
};

/// Limit variance of sqrt(n) (M_g - E_g). Throws DegenerateError when
/// g'(E_g(X)) vanishes.
AsymptoticSpec asymptotic_variance(const Generator& g, const DistributionModel& dist,
                                   MomentMethod method = MomentMethod::automatic);

/// sqrt(n) (m_value - E_g) / sqrt(asym_var).
double standardize(const AsymptoticSpec& spec, double m_value, std::size_t n);

/// sqrt(n) (m_value - E_g), the unscaled form.
double scaled_error(const AsymptoticSpec& spec, double m_value, std::size_t n);

double normal_cdf(double x) noexcept;
double normal_pdf(double x) noexcept;

/// p1(x) = x^2 - 1, p2(x) = x^3 - 3x, p3(x) = x^5 - 10x^3 + 15x.
double hermite(int k, double x);

/// Which coefficient multiplies p3 in the O(1/n) term.
enum class EdgeworthVariant {
  classical,               // skewness squared
  literal_kappa_squared,   // excess kurtosis squared
};

#ifdef REGMEAN_EDGEWORTH_LITERAL_KAPPA2
inline constexpr EdgeworthVariant kDefaultEdgeworthVariant = EdgeworthVariant::literal_kappa_squared;
#else
inline constexpr EdgeworthVariant kDefaultEdgeworthVariant = EdgeworthVariant::classical;
#endif

struct EdgeworthTerms {
  double normal_cdf = 0.0;
  std::array<double, 3> corrections{};  // each already multiplied by phi(x)
  double value = 0.0;                   // normal_cdf - sum(corrections), unclamped
};

EdgeworthTerms edgeworth_terms(double x, std::size_t n, const GMoments& mom,
                               EdgeworthVariant variant = kDefaultEdgeworthVariant);

/// Phi(x) - phi(x) [g p1/(6 sqrt n) + k p2/(24 n) + g^2 p3/(72 n)] with g, k the
/// skewness and excess kurtosis of g(X). Not clamped to [0, 1].
double edgeworth_cdf(double x, std::size_t n, const GMoments& mom,
                     EdgeworthVariant variant = kDefaultEdgeworthVariant);

/// edgeworth_cdf clamped to [0, 1].
double edgeworth_cdf_clamped(double x, std::size_t n, const GMoments& mom,
                             EdgeworthVariant variant = kDefaultEdgeworthVariant);

}  // namespace regmean
