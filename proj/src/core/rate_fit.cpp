#include "rate_fit.hpp"

#include <cmath>
#include <stdexcept>

namespace vva {

RateFit fit_rate(const std::vector<std::pair<std::uint64_t, double>>& points) {
  if (points.size() < 3) {
    throw std::invalid_argument("rate fit needs at least 3 points");
  }
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (const auto& [k, err] : points) {
    if (!(err > 0.0)) {
      throw std::invalid_argument("rate fit requires positive errors");
    }
    sx += std::log2(static_cast<double>(k));
    sy += std::log2(err);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [k, err] : points) {
    const double dx = std::log2(static_cast<double>(k)) - mx;
    const double dy = std::log2(err) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("rate fit requires distinct n values");
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points_used = points.size();
  const double ss_res = syy - sxy * sxy / sxx;
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

}  // namespace vva
