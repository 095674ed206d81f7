#include "regmean/portfolio.hpp"

#include <cmath>
#include <string>

#include "regmean/errors.hpp"
#include "regmean/format.hpp"
#include "regmean/regular_mean.hpp"

namespace regmean {
namespace {

double log_growth(const ReturnSeries& series) {
  CompensatedSum s;
  for (double r : series.returns) s.add(std::log1p(r));
  return s.value();
}

}  // namespace

void validate(const ReturnSeries& series) {
  if (series.returns.empty()) throw InvalidParameter("return series is empty");
  if (!(series.w0 > 0.0) || !std::isfinite(series.w0)) {
    throw InvalidParameter("initial wealth must be positive, got " + format17(series.w0));
  }
  for (std::size_t t = 0; t < series.returns.size(); ++t) {
    const double r = series.returns[t];
    if (!std::isfinite(r) || !(1.0 + r > 0.0)) {
      throw DomainError("gross return 1 + r at period " + std::to_string(t + 1) +
                        " is not positive (r = " + format17(r) + ")");
    }
  }
}

double wealth_path(const ReturnSeries& series) {
  validate(series);
  double w = series.w0;
  for (double r : series.returns) w *= 1.0 + r;
  return w;
}

double geometric_average_return(const ReturnSeries& series) {
  validate(series);
  return std::exp(log_growth(series) / static_cast<double>(series.returns.size()));
}

double markowitz_approximation(const ReturnSeries& series, VarianceDivisor divisor) {
  if (series.returns.empty()) throw InvalidParameter("return series is empty");
  const double n = static_cast<double>(series.returns.size());
  CompensatedSum s;
  for (double r : series.returns) s.add(r);
  const double mean = s.value() / n;
  CompensatedSum ss;
  for (double r : series.returns) ss.add((r - mean) * (r - mean));
  double var = 0.0;
  if (divisor == VarianceDivisor::population) {
    var = ss.value() / n;
  } else if (series.returns.size() > 1) {
    var = ss.value() / (n - 1.0);
  }
  return std::exp(mean - 0.5 * (mean * mean + var));
}

}  // namespace regmean
