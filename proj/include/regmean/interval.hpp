#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace regmean {

/// Closed interval [lo, hi] with lo < hi. Used as a compact evaluation domain
/// (the sets A and B of the stability bound) and as a bisection bracket.
class Interval {
 public:
  Interval(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  bool is_compact() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }
  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

  /// Evenly spaced grid of `points` values including both endpoints.
  double grid_point(std::size_t i, std::size_t points) const noexcept;

  std::string to_string() const;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

/// A possibly unbounded interval with independently open or closed ends.
/// Describes a generator's input range or a distribution's support.
struct Domain {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = true;
  bool hi_open = true;

  static Domain real_line() { return {}; }
  static Domain positive() { return {0.0, std::numeric_limits<double>::infinity(), true, true}; }
  static Domain closed(double lo, double hi) { return {lo, hi, false, false}; }

  bool contains(double x) const noexcept {
    if (std::isnan(x)) return false;
    const bool above = lo_open ? x > lo : x >= lo;
    const bool below = hi_open ? x < hi : x <= hi;
    return above && below;
  }

  /// True when every point of `other` lies in this domain.
  bool includes(const Domain& other) const noexcept;
  bool includes(const Interval& b) const noexcept { return contains(b.lo()) && contains(b.hi()); }

  Domain intersect(const Domain& other) const noexcept;

  std::string to_string() const;
};

}  // namespace regmean
