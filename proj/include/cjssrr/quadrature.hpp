#pragma once

#include <cstddef>
#include <functional>

namespace cjssrr {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;       // sum of panel error estimates
  std::size_t panels = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod integration to an absolute
/// tolerance. The range is first split into `initial_panels` equal pieces
/// (use roughly one per half-oscillation of the integrand). Throws
/// QuadratureFailure when `max_panels` is exceeded.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double abs_tol, std::size_t initial_panels = 1,
                                    std::size_t max_panels = 200000);

}  // namespace cjssrr
