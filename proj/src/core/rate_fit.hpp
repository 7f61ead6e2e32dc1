#pragma once

#include <cstdint>
#include <vector>

namespace vva {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points_used = 0;
};

// Ordinary least squares on (log2 n, log2 error). All errors must be
// positive and at least 3 points are required; callers filter exact-zero
// cells beforehand.
RateFit fit_rate(const std::vector<std::pair<std::uint64_t, double>>& points);

}  // namespace vva
