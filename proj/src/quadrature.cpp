#include "regmean/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "regmean/errors.hpp"

namespace regmean {
namespace {

// Kronrod abscissae (positive half, descending); odd indices are the 10-point
// Gauss nodes.
constexpr std::array<double, 11> kNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208976887396, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// One GK21 rule with the QUADPACK error heuristic.
Panel apply_rule(const std::function<double(double)>& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 21> fv{};
  fv[10] = f(center);
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kNodes[j];
    fv[j] = f(center - dx);
    fv[20 - j] = f(center + dx);
  }
  double kronrod = kKronrodWeights[10] * fv[10];
  double gauss = 0.0;
  double abs_sum = std::abs(kronrod);
  for (std::size_t j = 0; j < 10; ++j) {
    const double pair = fv[j] + fv[20 - j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(fv[j]) + std::abs(fv[20 - j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[10] * std::abs(fv[10] - mean);
  for (std::size_t j = 0; j < 10; ++j) {
    asc += kKronrodWeights[j] * (std::abs(fv[j] - mean) + std::abs(fv[20 - j] - mean));
  }
  const double value = kronrod * half;
  abs_sum *= std::abs(half);
  asc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  if (abs_sum > tiny / (50.0 * eps)) err = std::max(50.0 * eps * abs_sum, err);
  return {a, b, value, err};
}

}  // namespace

QuadratureResult integrate_gk21(const std::function<double(double)>& f, double a, double b,
                                const QuadratureOptions& options) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidParameter("integrate_gk21 needs finite limits");
  }
  QuadratureResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  std::priority_queue<Panel> panels;
  const Panel first = apply_rule(f, a, b);
  panels.push(first);
  double total = first.value;
  double total_err = first.error;
  const auto target = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };

  while (total_err > target() && result.subdivisions < options.max_subdivisions) {
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) break;
    panels.pop();
    const Panel left = apply_rule(f, worst.a, mid);
    const Panel right = apply_rule(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++result.subdivisions;
    if (!std::isfinite(total)) break;
  }

  // Re-sum from the panels to shed drift from the incremental updates.
  double value = 0.0;
  double error = 0.0;
  while (!panels.empty()) {
    value += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  result.value = value;
  result.error = error;
  result.converged = std::isfinite(value) &&
                     error <= std::max(options.abs_tol, options.rel_tol * std::abs(value));
  return result;
}

}  // namespace regmean
