#include "qvi/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qvi/errors.hpp"

namespace qvi {

RateFit fit_linear_rate(std::span<const double> residuals) {
  constexpr double kFloor = 100.0 * std::numeric_limits<double>::epsilon();
  std::size_t end = residuals.size();
  while (end > 0 && !(residuals[end - 1] >= kFloor)) --end;

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < end; ++i) {
    const double r = residuals[i];
    if (r > 0.0 && std::isfinite(r)) {
      xs.push_back(static_cast<double>(i));
      ys.push_back(std::log(r));
    }
  }
  if (xs.size() < 5) {
    throw DiagnosticsError("rate fit needs at least 5 usable residuals, got " + std::to_string(xs.size()));
  }

  const auto m = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  RateFit fit;
  fit.points = xs.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.factor = std::clamp(std::exp(fit.slope), std::numeric_limits<double>::min(), 1.0);
  return fit;
}

double continuous_rate(const RateFit& fit, double h) {
  if (!(h > 0.0)) throw ContractError("continuous rate needs h > 0");
  return -fit.slope / h;
}

}  // namespace qvi
