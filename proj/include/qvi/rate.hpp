#pragma once

#include <cstddef>
#include <span>

namespace qvi {

struct RateFit {
  double factor = 1.0;     // exp(slope), clamped to (0, 1]
  double slope = 0.0;      // d log r / d index
  double intercept = 0.0;  // log r at index 0
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of log(residual) against the index. Trailing residuals
/// below 100·ε are dropped first; needs at least 5 usable points and throws
/// DiagnosticsError otherwise.
RateFit fit_linear_rate(std::span<const double> residuals);

/// Continuous-time decay rate −slope/h for residuals sampled every h.
double continuous_rate(const RateFit& fit, double h);

}  // namespace qvi
