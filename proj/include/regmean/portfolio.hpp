#pragma once

#include <vector>

namespace regmean {

/// Period returns as fractions (0.05 is five percent) and initial wealth.
struct ReturnSeries {
  std::vector<double> returns;
  double w0 = 1.0;
};

enum class VarianceDivisor { population, sample };

/// Throws InvalidParameter for an empty series or w0 <= 0, and DomainError
/// when some gross return 1 + r is not positive.
void validate(const ReturnSeries& series);

/// w0 (1 + r_1) ... (1 + r_n).
double wealth_path(const ReturnSeries& series);

/// {prod (1 + r_t)}^{1/n}, the gross geometric average, via logs.
double geometric_average_return(const ReturnSeries& series);

/// exp{rbar - (rbar^2 + s^2) / 2}. s^2 uses divisor n by default; with
/// VarianceDivisor::sample and n = 1 it is taken as 0.
double markowitz_approximation(const ReturnSeries& series,
                               VarianceDivisor divisor = VarianceDivisor::population);

}  // namespace regmean
