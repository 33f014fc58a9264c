#pragma once

#include <functional>

namespace acctest::quadrature {

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  long evaluations = 0;
};

/// Globally adaptive Simpson quadrature with Richardson correction on [a, b].
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below `abs_tol`. Endpoints of [a, b] are sampled one ulp
/// inside the interval, so a jump placed exactly at a or b is integrated with
/// its one-sided limit. `converged` is false if the panel budget runs out or
/// a non-finite value appears.
Result adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, long max_panels = 2'000'000);

}  // namespace acctest::quadrature
