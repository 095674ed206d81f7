#include "regmean/generator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "regmean/errors.hpp"

namespace regmean {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Bisection core shared by invert() and the numeric-inverse fallback.
// Requires sign(f(a) - y) != sign(f(b) - y) in the orientation given by
// `increasing`. When the bracket shrinks to adjacent doubles the closer
// endpoint is returned if `accept_collapse`, otherwise it must meet tol.
double bisect(const Generator::Fn& f, double y, double a, double b, bool increasing, double tol,
              int max_iterations, bool accept_collapse) {
  double lo = a;
  double hi = b;
  // true when the root lies to the right of a point with value v
  const auto below = [&](double v) { return increasing ? v < y : v > y; };
  double flo = f(lo);
  double fhi = f(hi);
  if (std::abs(flo - y) <= tol) return lo;
  if (std::abs(fhi - y) <= tol) return hi;
  for (int it = 0; it < max_iterations; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid == lo || mid == hi) {
      const double best = std::abs(flo - y) <= std::abs(fhi - y) ? lo : hi;
      const double resid = std::min(std::abs(flo - y), std::abs(fhi - y));
      if (accept_collapse || resid <= tol) return best;
      throw NumericFailure("bisection bracket collapsed with residual " + format_number(resid) +
                           " above tolerance " + format_number(tol));
    }
    const double fm = f(mid);
    if (std::abs(fm - y) <= tol) return mid;
    if (below(fm)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  if (accept_collapse) return lo + 0.5 * (hi - lo);
  throw NumericFailure("bisection did not converge within " + std::to_string(max_iterations) +
                       " iterations");
}

double starting_point(const Domain& d) {
  const bool lo_finite = std::isfinite(d.lo);
  const bool hi_finite = std::isfinite(d.hi);
  if (lo_finite && hi_finite) return d.lo + 0.5 * (d.hi - d.lo);
  if (lo_finite) return d.lo + std::max(1.0, std::abs(d.lo));
  if (hi_finite) return d.hi - std::max(1.0, std::abs(d.hi));
  return 0.0;
}

// Moves from x towards `edge` (possibly infinite) by doubling steps or by
// halving the remaining distance to a finite edge.
double step_towards(double x, double edge, double& step) {
  if (std::isfinite(edge)) {
    return x + 0.5 * (edge - x);
  }
  step *= 2.0;
  return edge > x ? x + step : x - step;
}

struct Registry {
  std::mutex mutex;
  std::map<std::string, std::function<Generator(std::optional<double>)>, std::less<>> factories;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

std::string to_string(BuiltinKind kind) {
  switch (kind) {
    case BuiltinKind::identity: return "identity";
    case BuiltinKind::log: return "log";
    case BuiltinKind::reciprocal: return "reciprocal";
    case BuiltinKind::power: return "power";
    case BuiltinKind::exp: return "exp";
  }
  return "unknown";
}

Generator Generator::custom(std::string name, Domain domain, Monotonicity direction, Fn forward,
                            Fn inverse, Fn derivative) {
  if (!forward) throw InvalidParameter("generator '" + name + "' needs a forward function");
  auto state = std::make_shared<State>();
  state->name = std::move(name);
  state->domain = domain;
  state->direction = direction;
  state->forward = std::move(forward);
  state->inverse = std::move(inverse);
  state->derivative = std::move(derivative);
  return Generator(std::move(state));
}

double Generator::forward(double x) const {
  if (!state_->domain.contains(x)) {
    throw DomainError("generator '" + name() + "' evaluated at " + format_number(x) +
                      " outside its input range " + state_->domain.to_string());
  }
  return state_->forward(x);
}

double Generator::inverse(double y) const {
  if (std::isnan(y)) throw DomainError("generator '" + name() + "' inverse evaluated at NaN");
  if (state_->inverse) return state_->inverse(y);
  return numeric_inverse(y);
}

double Generator::derivative(double x) const {
  if (!state_->domain.contains(x)) {
    throw DomainError("derivative of '" + name() + "' evaluated at " + format_number(x) +
                      " outside its input range " + state_->domain.to_string());
  }
  if (state_->derivative) return state_->derivative(x);
  return numeric_derivative(x);
}

double Generator::numeric_derivative(double x) const {
  const Domain& d = state_->domain;
  if (!d.contains(x)) {
    throw DomainError("numeric derivative of '" + name() + "' outside its input range");
  }
  double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(x));
  if (std::isfinite(d.lo)) h = std::min(h, 0.5 * (x - d.lo) > 0 ? 0.5 * (x - d.lo) : h);
  if (std::isfinite(d.hi)) h = std::min(h, 0.5 * (d.hi - x) > 0 ? 0.5 * (d.hi - x) : h);
  const Fn& f = state_->forward;
  const bool left_ok = d.contains(x - h);
  const bool right_ok = d.contains(x + h);
  if (left_ok && right_ok) return (f(x + h) - f(x - h)) / (2.0 * h);
  if (right_ok) return (f(x + h) - f(x)) / h;
  if (left_ok) return (f(x) - f(x - h)) / h;
  throw NumericFailure("no room for a finite difference at " + format_number(x));
}

double Generator::numeric_inverse(double y) const {
  const Domain& d = state_->domain;
  const Fn& f = state_->forward;
  const bool inc = increasing();
  const double x0 = starting_point(d);
  const double f0 = f(x0);
  if (f0 == y) return x0;
  // Which way does x have to move for g(x) to approach y?
  const bool go_right = inc ? y > f0 : y < f0;
  const double edge = go_right ? d.hi : d.lo;
  double step = std::max(1.0, std::abs(x0)) * 0.5;
  double inner = x0;
  double outer = x0;
  bool found = false;
  for (int i = 0; i < 2200; ++i) {
    const double next = step_towards(outer, edge, step);
    if (next == outer || !d.contains(next) || !std::isfinite(next)) break;
    const double fv = f(next);
    if (std::isnan(fv)) break;
    inner = outer;
    outer = next;
    const bool passed = go_right == inc ? fv >= y : fv <= y;
    if (passed) {
      found = true;
      break;
    }
  }
  if (!found) {
    throw DomainError("value " + format_number(y) + " is outside the image of generator '" +
                      name() + "'");
  }
  const double a = std::min(inner, outer);
  const double b = std::max(inner, outer);
  return bisect(f, y, a, b, inc, 0.0, 2000, true);
}

Generator make_builtin(BuiltinKind kind, std::optional<double> p) {
  auto state = std::make_shared<Generator::State>();
  BuiltinForm form;
  form.kind = kind;
  switch (kind) {
    case BuiltinKind::identity:
      state->name = "identity";
      state->domain = Domain::real_line();
      state->forward = [](double x) { return x; };
      state->inverse = [](double y) { return y; };
      state->derivative = [](double) { return 1.0; };
      break;
    case BuiltinKind::log:
      state->name = "log";
      state->domain = Domain::positive();
      state->forward = [](double x) { return std::log(x); };
      state->inverse = [](double y) {
        const double x = std::exp(y);
        if (x == 0.0 || !std::isfinite(x)) {
          throw NumericFailure("exp(" + format_number(y) + ") leaves the range of doubles");
        }
        return x;
      };
      state->derivative = [](double x) { return 1.0 / x; };
      break;
    case BuiltinKind::reciprocal:
      state->name = "reciprocal";
      state->domain = Domain::positive();
      state->direction = Monotonicity::decreasing;
      state->forward = [](double x) { return 1.0 / x; };
      state->inverse = [](double y) {
        if (!(y > 0.0)) {
          throw DomainError("reciprocal inverse needs a positive argument, got " +
                            format_number(y));
        }
        return 1.0 / y;
      };
      state->derivative = [](double x) { return -1.0 / (x * x); };
      break;
    case BuiltinKind::power: {
      if (!p) throw InvalidParameter("power generator requires an exponent p");
      const double e = *p;
      if (!(e > 0.0) || !std::isfinite(e)) {
        throw InvalidParameter("power generator requires p > 0, got " + format_number(e));
      }
      form.p = e;
      state->name = "power:" + format_number(e);
      state->domain = Domain::positive();
      state->forward = [e](double x) { return std::pow(x, e); };
      state->inverse = [e](double y) {
        if (!(y > 0.0)) {
          throw DomainError("power inverse needs a positive argument, got " + format_number(y));
        }
        return std::pow(y, 1.0 / e);
      };
      state->derivative = [e](double x) { return e * std::pow(x, e - 1.0); };
      break;
    }
    case BuiltinKind::exp:
      state->name = "exp";
      state->domain = Domain::real_line();
      state->forward = [](double x) { return std::exp(x); };
      state->inverse = [](double y) {
        if (!(y > 0.0)) {
          throw DomainError("exp inverse needs a positive argument, got " + format_number(y));
        }
        return std::log(y);
      };
      state->derivative = [](double x) { return std::exp(x); };
      break;
  }
  if (kind != BuiltinKind::power && p) {
    throw InvalidParameter("generator '" + to_string(kind) + "' takes no parameter");
  }
  state->builtin = form;
  return Generator(std::move(state));
}

Generator affine(const Generator& g, double scale, double shift) {
  if (!(scale != 0.0) || !std::isfinite(scale) || !std::isfinite(shift)) {
    throw InvalidParameter("affine map needs a finite nonzero scale and finite shift");
  }
  auto state = std::make_shared<Generator::State>(*g.state_);
  state->name = format_number(scale) + "*" + g.name() +
                (shift != 0.0 ? (shift > 0 ? "+" : "") + format_number(shift) : "");
  if (scale < 0) {
    state->direction = g.increasing() ? Monotonicity::decreasing : Monotonicity::increasing;
  }
  const Generator base = g;
  state->forward = [base, scale, shift](double x) {
    return scale * base.forward(x) + shift;
  };
  state->inverse = [base, scale, shift](double y) { return base.inverse((y - shift) / scale); };
  state->derivative = [base, scale](double x) { return scale * base.derivative(x); };
  if (state->builtin) {
    state->builtin->shift = scale * state->builtin->shift + shift;
    state->builtin->scale *= scale;
  }
  return Generator(std::move(state));
}

Generator increasing_form(const Generator& g) {
  return g.increasing() ? g : affine(g, -1.0, 0.0);
}

Generator blend(const Generator& g, const Generator& h, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidParameter("blend weight must lie in [0, 1], got " + format_number(t));
  }
  if (g.direction() != h.direction()) {
    throw InvalidParameter("blend requires generators with the same monotone direction");
  }
  if (t == 0.0) return g;
  if (t == 1.0) return h;
  const Domain dom = g.domain().intersect(h.domain());
  const std::string name = "blend(" + g.name() + "," + h.name() + "," + format_number(t) + ")";
  const Generator::Fn f = [g, h, t](double x) { return (1.0 - t) * g(x) + t * h(x); };
  const Generator::Fn df = [g, h, t](double x) {
    return (1.0 - t) * g.derivative(x) + t * h.derivative(x);
  };
  const Generator fallback = Generator::custom(name, dom, g.direction(), f, {}, df);
  // The blend's root lies between g^{-1}(y) and h^{-1}(y) whenever both exist;
  // Newton steps are taken inside that bracket, with bisection as a guard.
  const Generator::Fn inv = [g, h, f, df, fallback](double y) {
    double a = 0.0;
    double b = 0.0;
    try {
      a = g.inverse(y);
      b = h.inverse(y);
    } catch (const Error&) {
      return fallback.numeric_inverse(y);
    }
    if (a > b) std::swap(a, b);
    if (a == b) return a;
    const bool inc = g.increasing();
    double x = a + 0.5 * (b - a);
    for (int it = 0; it < 200; ++it) {
      const double r = f(x) - y;
      if (r == 0.0) return x;
      if ((r < 0.0) == inc) a = x; else b = x;
      const double slope = df(x);
      double next = x - r / slope;
      if (!(next > a && next < b)) next = a + 0.5 * (b - a);
      if (next == x || next == a || next == b) return x;
      if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
        return next;
      }
      x = next;
    }
    return x;
  };
  return Generator::custom(name, dom, g.direction(), f, inv, df);
}

void register_generator(std::string name,
                        std::function<Generator(std::optional<double>)> factory) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.factories.insert_or_assign(std::move(name), std::move(factory));
}

Generator parse_generator(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  std::optional<double> arg;
  if (colon != std::string_view::npos) {
    const std::string_view tail = spec.substr(colon + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), v);
    if (ec != std::errc() || ptr != tail.data() + tail.size()) {
      throw InvalidParameter("cannot parse generator parameter in '" + std::string(spec) + "'");
    }
    arg = v;
  }
  if (head == "identity") return make_builtin(BuiltinKind::identity, arg);
  if (head == "log") return make_builtin(BuiltinKind::log, arg);
  if (head == "reciprocal") return make_builtin(BuiltinKind::reciprocal, arg);
  if (head == "power") return make_builtin(BuiltinKind::power, arg);
  if (head == "exp") return make_builtin(BuiltinKind::exp, arg);
  {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    if (auto it = r.factories.find(head); it != r.factories.end()) return it->second(arg);
  }
  throw InvalidParameter("unknown generator '" + std::string(spec) + "'");
}

double invert(const Generator& g, double y, const Interval& bracket, double tol,
              int max_iterations) {
  if (!g.domain().includes(bracket)) {
    throw DomainError("bracket " + bracket.to_string() + " is not inside the input range of '" +
                      g.name() + "'");
  }
  const double fa = g(bracket.lo());
  const double fb = g(bracket.hi());
  if (y < std::min(fa, fb) - tol || y > std::max(fa, fb) + tol) {
    throw OutOfRangeError("value " + format_number(y) + " is outside the image [" +
                          format_number(std::min(fa, fb)) + ", " +
                          format_number(std::max(fa, fb)) + "] of '" + g.name() + "' on " +
                          bracket.to_string());
  }
  return bisect([&g](double x) { return g(x); }, y, bracket.lo(), bracket.hi(), g.increasing(),
                tol, max_iterations, false);
}

namespace {

template <typename Reduce>
double reduce_slopes(const Generator& g, const Interval& b, std::size_t grid_points,
                     double init, Reduce reduce) {
  if (grid_points < 2) throw InvalidParameter("slope grid needs at least 2 points");
  if (!b.is_compact()) throw InvalidParameter("slope grid needs a compact interval");
  if (!g.domain().includes(b)) {
    throw DomainError("interval " + b.to_string() + " is not inside the input range " +
                      g.domain().to_string() + " of '" + g.name() + "'");
  }
  double acc = init;
  for (std::size_t i = 0; i < grid_points; ++i) {
    acc = reduce(acc, std::abs(g.derivative(b.grid_point(i, grid_points))));
  }
  return acc;
}

}  // namespace

double estimate_lipschitz(const Generator& g, const Interval& b, std::size_t grid_points) {
  return reduce_slopes(g, b, grid_points, 0.0,
                       [](double acc, double s) { return std::max(acc, s); });
}

double min_slope(const Generator& g, const Interval& b, std::size_t grid_points) {
  const double m = reduce_slopes(g, b, grid_points, kInf,
                                 [](double acc, double s) { return std::min(acc, s); });
  if (!(m > std::numeric_limits<double>::min())) {
    throw DegenerateError("generator '" + g.name() + "' has a vanishing slope on " +
                          b.to_string());
  }
  return m;
}

}  // namespace regmean
