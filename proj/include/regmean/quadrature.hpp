#pragma once

#include <functional>

namespace regmean {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;  // applied to |integral|; the larger of the two wins
  int max_subdivisions = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  int subdivisions = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature on a finite [a, b]:
/// the panel with the largest error estimate is bisected until the summed
/// estimate meets the tolerance or the subdivision budget runs out.
QuadratureResult integrate_gk21(const std::function<double(double)>& f, double a, double b,
                                const QuadratureOptions& options = {});

}  // namespace regmean
