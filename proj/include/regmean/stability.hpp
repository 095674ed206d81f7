#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "regmean/generator.hpp"

namespace regmean {

/// Ingredients of the bound ||M_g - M_h|| <= (L + 1/m) ||g - h|| on B.
struct StabilityBound {
  double lipschitz_inverse = 0.0;   // L: 1 / min slope of g on B
  double min_slope = 0.0;           // m: smaller of the two minimum slopes
  double generator_distance = 0.0;  // sup |g - h| over the grid of B
  double constant = 0.0;            // L + 1/m
  double bound = 0.0;               // constant * generator_distance
};

/// Grid estimate of the generator-perturbation bound. Decreasing generators
/// are negated first, which leaves both regular means unchanged.
///
/// Throws DomainError if B leaves either input range and DegenerateError if
/// a minimum slope vanishes.
StabilityBound stability_bound(const Generator& g, const Generator& h, const Interval& b,
                               std::size_t grid = 10001);

struct StabilityOptions {
  std::size_t grid_per_dim = 201;
  std::size_t slope_grid = 10001;
  std::size_t random_points = 200000;  // used when n > 3
  std::uint64_t seed = 42;
  double relative_slack = 1e-6;
};

struct StabilityReport {
  double sup_mean_distance = 0.0;   // max |M_g - M_h| over the evaluated points of A
  double generator_distance = 0.0;  // sup |g - h| over the grid of B
  double bound_constant = 0.0;      // L + 1/m
  double bound = 0.0;
  double lipschitz_inverse = 0.0;
  double min_slope = 0.0;
  double grid_slack = 0.0;          // satisfied <=> sup_mean_distance <= bound + grid_slack
  bool satisfied = false;
  bool exhaustive = false;          // grid over A, or random points
  std::size_t points = 0;
  std::string note;
};

/// Measures sup |M_g(x) - M_h(x)| for x in the box A (one interval per
/// coordinate) and compares with stability_bound on the hull B of the box.
///
/// For n <= 3 the box is covered by a grid with grid_per_dim points per axis;
/// when all coordinates share one interval only sorted tuples are visited,
/// since both means are symmetric. For n > 3 random points are used.
StabilityReport verify_stability(const Generator& g, const Generator& h,
                                 std::span<const Interval> box,
                                 const StabilityOptions& options = {});

/// Same interval on each of n coordinates.
StabilityReport verify_stability(const Generator& g, const Generator& h, const Interval& box,
                                 std::size_t n, const StabilityOptions& options = {});

}  // namespace regmean
