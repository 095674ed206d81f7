#pragma once

#include <stdexcept>
#include <string>

namespace regmean {

enum class ErrorKind {
  domain,             // argument outside a function's input range
  invalid_parameter,  // malformed parameter (e.g. power with p <= 0)
  out_of_range,       // target value outside the image of a bracket
  configuration,      // incompatible combination of inputs
  numeric_failure,    // overflow or non-convergence
  divergence,         // an integral or moment is infinite
  degenerate,         // zero slope, zero variance, zero derivative
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what)
      : Error(ErrorKind::invalid_parameter, what) {}
};

class OutOfRangeError : public Error {
 public:
  explicit OutOfRangeError(const std::string& what)
      : Error(ErrorKind::out_of_range, what) {}
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what)
      : Error(ErrorKind::configuration, what) {}
};

class NumericFailure : public Error {
 public:
  explicit NumericFailure(const std::string& what)
      : Error(ErrorKind::numeric_failure, what) {}
};

/// Raised when a moment or expectation integral is infinite. `order()` is the
/// moment order that diverged (0 when not tied to a specific order).
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int order)
      : Error(ErrorKind::divergence, what), order_(order) {}
  int order() const noexcept { return order_; }

 private:
  int order_;
};

class DegenerateError : public Error {
 public:
  explicit DegenerateError(const std::string& what)
      : Error(ErrorKind::degenerate, what) {}
};

}  // namespace regmean
