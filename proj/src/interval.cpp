#include "regmean/interval.hpp"

#include <sstream>

#include "regmean/errors.hpp"

namespace regmean {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::numeric_failure: return "numeric-failure";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::degenerate: return "degenerate";
  }
  return "unknown";
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo < hi)) {
    throw InvalidParameter("interval requires lo < hi, got [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  }
}

double Interval::grid_point(std::size_t i, std::size_t points) const noexcept {
  if (points < 2) return lo_;
  if (i + 1 == points) return hi_;
  return lo_ + (hi_ - lo_) * static_cast<double>(i) / static_cast<double>(points - 1);
}

std::string Interval::to_string() const {
  std::ostringstream os;
  os << '[' << lo_ << ", " << hi_ << ']';
  return os.str();
}

bool Domain::includes(const Domain& other) const noexcept {
  const bool lo_ok = other.lo > lo || (other.lo == lo && (!lo_open || other.lo_open));
  const bool hi_ok = other.hi < hi || (other.hi == hi && (!hi_open || other.hi_open));
  return lo_ok && hi_ok;
}

Domain Domain::intersect(const Domain& other) const noexcept {
  Domain d = *this;
  if (other.lo > d.lo || (other.lo == d.lo && other.lo_open)) {
    d.lo = other.lo;
    d.lo_open = other.lo_open;
  }
  if (other.hi < d.hi || (other.hi == d.hi && other.hi_open)) {
    d.hi = other.hi;
    d.hi_open = other.hi_open;
  }
  return d;
}

std::string Domain::to_string() const {
  std::ostringstream os;
  os << (lo_open ? '(' : '[') << lo << ", " << hi << (hi_open ? ')' : ']');
  return os.str();
}

}  // namespace regmean
