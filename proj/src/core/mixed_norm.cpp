#include "mixed_norm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vva {

namespace {

double peak_magnitude(std::span<const double> xs) {
  double peak = 0.0;
  for (double x : xs) peak = std::max(peak, std::fabs(x));
  return peak;
}

// Shared kernel for inner and outer norms: all entries are already
// nonnegative in the outer call.
double power_mean_abs(std::span<const double> xs, Exponent e) {
  const double peak = peak_magnitude(xs);
  if (peak == 0.0) return 0.0;
  if (e.is_infinite()) return peak;

  const double val = e.value();
  const double n = static_cast<double>(xs.size());
  if (val == 1.0) {
    double sum = 0.0;
    for (double x : xs) sum += std::fabs(x);
    return sum / n;
  }
  if (val == 2.0) {
    double sum = 0.0;
    for (double x : xs) sum += x * x;
    return std::sqrt(sum / n);
  }
  double sum = 0.0;
  for (double x : xs) {
    const double t = std::fabs(x) / peak;
    if (t > 0.0) sum += std::pow(t, val);
  }
  return peak * std::pow(sum / n, e.reciprocal());
}

}  // namespace

double inner_norm(std::span<const double> row, Exponent u) {
  if (row.empty()) throw std::invalid_argument("inner_norm: empty row");
  return power_mean_abs(row, u);
}

double mixed_norm(const Matrix& f, Exponent p, Exponent u) {
  std::vector<double> row_norms(f.rows());
  for (std::size_t i = 0; i < f.rows(); ++i) {
    row_norms[i] = inner_norm(f.row(i), u);
  }
  return power_mean_abs(row_norms, p);
}

double embedding_norm(const SpacePair& sp) {
  const double outer = std::max(sp.p.reciprocal() - sp.q.reciprocal(), 0.0);
  const double inner = std::max(sp.u.reciprocal() - sp.v.reciprocal(), 0.0);
  return std::pow(static_cast<double>(sp.n1), outer) *
         std::pow(static_cast<double>(sp.n2), inner);
}

}  // namespace vva
