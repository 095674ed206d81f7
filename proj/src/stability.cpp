#include "regmean/stability.hpp"

#include <algorithm>
#include <cmath>

#include "regmean/errors.hpp"
#include "regmean/format.hpp"
#include "regmean/regular_mean.hpp"
#include "regmean/rng.hpp"

namespace regmean {
namespace {

double sup_distance(const Generator& g, const Generator& h, const Interval& b, std::size_t grid) {
  double d = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = b.grid_point(i, grid);
    d = std::max(d, std::abs(g(x) - h(x)));
  }
  return d;
}

// Visits index tuples of length n over `points` values per axis; with
// `sorted` only non-decreasing tuples.
template <typename Visit>
void for_each_tuple(std::size_t n, std::size_t points, bool sorted, Visit&& visit) {
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    visit(idx);
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (idx[k] + 1 < points) {
        ++idx[k];
        for (std::size_t j = k + 1; j < n; ++j) idx[j] = sorted ? idx[k] : 0;
        break;
      }
      if (k == 0) return;
    }
    if (n == 0) return;
  }
}

}  // namespace

StabilityBound stability_bound(const Generator& g, const Generator& h, const Interval& b,
                               std::size_t grid) {
  if (!b.is_compact()) throw InvalidParameter("stability bound needs a compact interval");
  const Generator gi = increasing_form(g);
  const Generator hi = increasing_form(h);
  StabilityBound out;
  const double slope_g = min_slope(gi, b, grid);
  const double slope_h = min_slope(hi, b, grid);
  out.lipschitz_inverse = 1.0 / slope_g;
  out.min_slope = std::min(slope_g, slope_h);
  out.generator_distance = sup_distance(gi, hi, b, grid);
  out.constant = out.lipschitz_inverse + 1.0 / out.min_slope;
  out.bound = out.constant * out.generator_distance;
  return out;
}

StabilityReport verify_stability(const Generator& g, const Generator& h,
                                 std::span<const Interval> box, const StabilityOptions& options) {
  const std::size_t n = box.size();
  if (n < 1) throw InvalidParameter("stability box needs at least one coordinate");
  for (const Interval& b : box) {
    if (!b.is_compact()) throw ConfigurationError("stability box must be compact");
    if (!g.domain().includes(b) || !h.domain().includes(b)) {
      throw ConfigurationError("stability box " + b.to_string() +
                               " leaves the input range of '" + g.name() + "' or '" + h.name() +
                               "'");
    }
  }
  double lo = box[0].lo();
  double hi = box[0].hi();
  bool shared = true;
  for (const Interval& b : box) {
    lo = std::min(lo, b.lo());
    hi = std::max(hi, b.hi());
    shared = shared && b == box[0];
  }
  const Interval hull(lo, hi);
  const StabilityBound bound = stability_bound(g, h, hull, options.slope_grid);

  StabilityReport report;
  report.generator_distance = bound.generator_distance;
  report.bound_constant = bound.constant;
  report.bound = bound.bound;
  report.lipschitz_inverse = bound.lipschitz_inverse;
  report.min_slope = bound.min_slope;

  std::vector<double> x(n);
  const auto measure = [&] {
    report.sup_mean_distance =
        std::max(report.sup_mean_distance, std::abs(mean(g, x) - mean(h, x)));
    ++report.points;
  };

  if (n <= 3) {
    if (options.grid_per_dim < 2) throw InvalidParameter("stability grid needs >= 2 points per axis");
    report.exhaustive = true;
    for_each_tuple(n, options.grid_per_dim, shared, [&](const std::vector<std::size_t>& idx) {
      for (std::size_t k = 0; k < n; ++k) x[k] = box[k].grid_point(idx[k], options.grid_per_dim);
      measure();
    });
  } else {
    RngStream rng(options.seed);
    for (std::size_t p = 0; p < options.random_points; ++p) {
      for (std::size_t k = 0; k < n; ++k) x[k] = box[k].lo() + box[k].width() * rng.uniform();
      measure();
    }
  }

  report.grid_slack = options.relative_slack * report.bound;
  report.satisfied = report.sup_mean_distance <= report.bound + report.grid_slack;
  report.note = std::string("sup-norms are grid estimates (") +
                (report.exhaustive ? std::to_string(options.grid_per_dim) + " points per axis"
                                   : std::to_string(options.random_points) + " random points") +
                " over A, " + std::to_string(options.slope_grid) +
                " points over B); not a certified bound";
  return report;
}

StabilityReport verify_stability(const Generator& g, const Generator& h, const Interval& box,
                                 std::size_t n, const StabilityOptions& options) {
  if (n < 1) throw InvalidParameter("stability check needs n >= 1");
  const std::vector<Interval> boxes(n, box);
  return verify_stability(g, h, boxes, options);
}

}  // namespace regmean
