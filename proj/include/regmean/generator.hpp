#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "regmean/interval.hpp"

namespace regmean {

enum class Monotonicity { increasing, decreasing };

enum class BuiltinKind { identity, log, reciprocal, power, exp };

/// Closed-form description of a generator `scale * base(x) + shift`, where
/// `base` is one of the built-in activation functions. Carried along so that
/// moment computations can take exact routes for affine images of built-ins.
struct BuiltinForm {
  BuiltinKind kind = BuiltinKind::identity;
  double p = 1.0;  // exponent, only meaningful for BuiltinKind::power
  double scale = 1.0;
  double shift = 0.0;
};

/// Defaults for numeric inversion by bisection.
struct InvertOptions {
  double tol = 1e-12;
  int max_iterations = 200;
};

/// A continuous strictly monotone generator g on its input range, together
/// with g^{-1} and g'. Either may be closed-form or numeric.
///
/// Generators are immutable values; copies share the underlying callables.
class Generator {
 public:
  using Fn = std::function<double(double)>;

  /// Registers a programmatic generator. `inverse` and `derivative` may be
  /// empty, in which case bisection and central differences are used.
  static Generator custom(std::string name, Domain domain, Monotonicity direction, Fn forward,
                          Fn inverse = {}, Fn derivative = {});

  const std::string& name() const noexcept { return state_->name; }
  const Domain& domain() const noexcept { return state_->domain; }
  Monotonicity direction() const noexcept { return state_->direction; }
  bool increasing() const noexcept { return direction() == Monotonicity::increasing; }
  const std::optional<BuiltinForm>& builtin() const noexcept { return state_->builtin; }

  bool has_closed_inverse() const noexcept { return static_cast<bool>(state_->inverse); }
  bool has_closed_derivative() const noexcept { return static_cast<bool>(state_->derivative); }

  /// g(x). Throws DomainError for x outside the input range.
  double forward(double x) const;
  double operator()(double x) const { return forward(x); }

  /// g^{-1}(y). Throws DomainError when y is outside the image of g.
  double inverse(double y) const;

  /// g'(x). Throws DomainError for x outside the input range.
  double derivative(double x) const;

  /// Central-difference derivative, step cbrt(eps) * max(1, |x|), shrunk to
  /// stay inside the input range.
  double numeric_derivative(double x) const;

  /// Bisection inverse over a bracket found by expanding outward from a point
  /// of the input range.
  double numeric_inverse(double y) const;

 private:
  struct State {
    std::string name;
    Domain domain;
    Monotonicity direction = Monotonicity::increasing;
    Fn forward;
    Fn inverse;
    Fn derivative;
    std::optional<BuiltinForm> builtin;
  };

  explicit Generator(std::shared_ptr<const State> state) : state_(std::move(state)) {}

  friend Generator make_builtin(BuiltinKind, std::optional<double>);
  friend Generator affine(const Generator&, double, double);

  std::shared_ptr<const State> state_;
};

/// Table-1 activation functions: identity and exp on the real line; log,
/// reciprocal and power on (0, inf). Power requires p > 0.
Generator make_builtin(BuiltinKind kind, std::optional<double> p = std::nullopt);

/// scale * g + shift. Regular means are invariant under this map.
Generator affine(const Generator& g, double scale, double shift);

/// g itself when increasing, -g otherwise.
Generator increasing_form(const Generator& g);

/// (1 - t) g + t h on the intersection of the two input ranges. Both must share
/// a monotone direction. t = 0 and t = 1 return g and h unchanged.
Generator blend(const Generator& g, const Generator& h, double t);

/// Parses "identity", "log", "reciprocal", "power:<p>", "exp", or a name added
/// with register_generator.
Generator parse_generator(std::string_view spec);

/// Hook for programmatic generators addressable from parse_generator. The
/// factory receives the optional ":<number>" argument of the spec string.
void register_generator(std::string name,
                        std::function<Generator(std::optional<double>)> factory);

/// Solves g(x) = y on `bracket` by bisection, returning x with
/// |g(x) - y| <= tol.
///
/// Throws OutOfRangeError when y lies outside the values of g at the bracket
/// ends, and NumericFailure if the tolerance is not met within the iteration
/// budget (or the bracket collapses to adjacent doubles first).
double invert(const Generator& g, double y, const Interval& bracket, double tol = 1e-12,
              int max_iterations = 200);

/// Grid estimate of sup |g'| over B (a lower bound on the Lipschitz constant).
double estimate_lipschitz(const Generator& g, const Interval& b, std::size_t grid_points = 10001);

/// Grid estimate of inf |g'| over B. Throws DegenerateError if not positive.
double min_slope(const Generator& g, const Interval& b, std::size_t grid_points = 10001);

std::string to_string(BuiltinKind kind);

}  // namespace regmean
