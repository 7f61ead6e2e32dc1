#include "algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace vva {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return (a + b - 1) / b;
}

void validate(const ApproxParams& params, bool adaptive) {
  if (params.n < 1) throw std::invalid_argument("budget n must be >= 1");
  if (params.m < 1) throw std::invalid_argument("repetitions m must be >= 1");
  if (adaptive) {
    const std::uint64_t grid =
        static_cast<std::uint64_t>(params.sp.n1) * params.sp.n2;
    if (params.n >= grid) {
      throw std::invalid_argument("a2/a3 require n < N1*N2");
    }
  }
}

// ((1/k) sum |x|^v)^(1/v) over already-collected samples.
double sample_power_mean(std::span<const double> samples, Exponent v) {
  return inner_norm(samples, v);
}

struct DirectQuery {
  InfoOracle& oracle;
  double operator()(std::size_t i, std::size_t j) const {
    return oracle.query(i, j);
  }
};

// Residual access: one real query per call, first-stage output subtracted
// in memory.
struct ResidualQuery {
  InfoOracle& oracle;
  const Matrix& stage_one;
  double operator()(std::size_t i, std::size_t j) const {
    return oracle.query(i, j) - stage_one(i, j);
  }
};

template <typename Query>
RowEstimates row_norms_impl(Query query, const ApproxParams& params,
                            RandomStream& stream) {
  const std::size_t n1 = params.sp.n1;
  const std::size_t n2 = params.sp.n2;
  const std::size_t per_estimate =
      static_cast<std::size_t>(ceil_div(params.n, n1));
  const std::size_t m = params.m;
  if (params.sp.v.is_infinite()) {
    throw std::invalid_argument("row estimation requires v < inf");
  }

  // Shared index table: the same sampled columns are reused for every row.
  // Filled repetition-major: table[k*per_estimate + j].
  std::vector<std::size_t> table(m * per_estimate);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < per_estimate; ++j) {
      table[k * per_estimate + j] =
          static_cast<std::size_t>(stream.uniform_below(n2));
    }
  }

  RowEstimates est;
  est.a.resize(n1 * m);
  est.medians.resize(n1);
  std::vector<double> samples(per_estimate);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t j = 0; j < per_estimate; ++j) {
        samples[j] = query(i, table[k * per_estimate + j]);
      }
      est.a[i * m + k] = sample_power_mean(samples, params.sp.v);
    }
    est.medians[i] =
        median_of(std::span<const double>(est.a.data() + i * m, m));
  }

  est.rank.resize(n1);
  std::iota(est.rank.begin(), est.rank.end(), std::size_t{0});
  std::stable_sort(est.rank.begin(), est.rank.end(),
                   [&](std::size_t a, std::size_t b) {
                     return est.medians[a] > est.medians[b];
                   });
  return est;
}

template <typename Query>
Matrix a2_impl(Query query, const ApproxParams& params, RandomStream& stream) {
  const std::size_t n1 = params.sp.n1;
  const std::size_t n2 = params.sp.n2;
  RowEstimates est = row_norms_impl(query, params, stream);

  const std::size_t keep = static_cast<std::size_t>(
      std::min<std::uint64_t>(ceil_div(params.n, n2), n1));
  Matrix out = Matrix::zero(n1, n2);
  for (std::size_t k = 0; k < keep; ++k) {
    const std::size_t row = est.rank[k];
    for (std::size_t j = 0; j < n2; ++j) {
      out(row, j) = query(row, j);
    }
  }
  return out;
}

}  // namespace

std::uint32_t default_repetitions(std::size_t n1, std::size_t n2) {
  const double bits = std::log2(static_cast<double>(n1 + n2));
  return static_cast<std::uint32_t>(std::ceil(11.1 * std::max(bits, 1.0)));
}

double median_of(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty vector");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  if (m % 2 == 1) return sorted[m / 2];
  return 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
}

double sampled_norm_estimate(InfoOracle& oracle, std::size_t row, Exponent v,
                             std::span<const std::size_t> indices) {
  if (v.is_infinite()) {
    throw std::invalid_argument("sampled_norm_estimate requires v < inf");
  }
  if (indices.empty()) {
    throw std::invalid_argument("sampled_norm_estimate: no sample indices");
  }
  std::vector<double> samples(indices.size());
  for (std::size_t t = 0; t < indices.size(); ++t) {
    samples[t] = oracle.query(row, indices[t]);
  }
  return sample_power_mean(samples, v);
}

RowEstimates estimate_row_norms(InfoOracle& oracle, const ApproxParams& params,
                                RandomStream& stream) {
  validate(params, false);
  return row_norms_impl(DirectQuery{oracle}, params, stream);
}

Matrix approx_a2(InfoOracle& oracle, const ApproxParams& params,
                 RandomStream& stream) {
  validate(params, true);
  return a2_impl(DirectQuery{oracle}, params, stream);
}

Matrix approx_a3(InfoOracle& oracle, const ApproxParams& params,
                 RandomStream& stream) {
  validate(params, true);
  // The two passes consume disjoint segments of one stream, realizing the
  // independent pair (omega_1, omega_2).
  Matrix first = a2_impl(DirectQuery{oracle}, params, stream);
  Matrix second = a2_impl(ResidualQuery{oracle, first}, params, stream);
  return first + second;
}

Matrix approx_dispatch(InfoOracle& oracle, const ApproxParams& params,
                       RandomStream& stream) {
  const SpacePair& sp = params.sp;
  if (sp.p >= sp.q || sp.u <= sp.v) {
    return zero_approximation(sp);
  }
  const std::uint64_t grid = static_cast<std::uint64_t>(sp.n1) * sp.n2;
  if (params.n >= grid) {
    Matrix out = Matrix::zero(sp.n1, sp.n2);
    for (std::size_t i = 0; i < sp.n1; ++i) {
      for (std::size_t j = 0; j < sp.n2; ++j) out(i, j) = oracle.query(i, j);
    }
    return out;
  }
  const double gap = sp.v.reciprocal() - sp.u.reciprocal();
  return gap <= 0.5 ? approx_a2(oracle, params, stream)
                    : approx_a3(oracle, params, stream);
}

Matrix zero_approximation(const SpacePair& sp) {
  return Matrix::zero(sp.n1, sp.n2);
}

Matrix approx_fixed_rows(InfoOracle& oracle, const SpacePair& sp,
                         std::uint64_t n) {
  const std::size_t keep = static_cast<std::size_t>(
      std::min<std::uint64_t>(n / sp.n2, sp.n1));
  Matrix out = Matrix::zero(sp.n1, sp.n2);
  for (std::size_t i = 0; i < keep; ++i) {
    for (std::size_t j = 0; j < sp.n2; ++j) out(i, j) = oracle.query(i, j);
  }
  return out;
}

Matrix approx_random_cells(InfoOracle& oracle, const SpacePair& sp,
                           std::uint64_t n, RandomStream& stream) {
  const std::uint64_t grid = static_cast<std::uint64_t>(sp.n1) * sp.n2;
  const std::uint64_t k = std::min(n, grid);
  Matrix out = Matrix::zero(sp.n1, sp.n2);

  // Floyd's sampling: k distinct cells, drawn before any value is seen.
  std::unordered_set<std::uint64_t> cells;
  cells.reserve(static_cast<std::size_t>(k) * 2);
  for (std::uint64_t j = grid - k; j < grid; ++j) {
    const std::uint64_t t = stream.uniform_below(j + 1);
    if (!cells.insert(t).second) cells.insert(j);
  }
  std::vector<std::uint64_t> ordered(cells.begin(), cells.end());
  std::sort(ordered.begin(), ordered.end());
  for (std::uint64_t cell : ordered) {
    const std::size_t i = static_cast<std::size_t>(cell / sp.n2);
    const std::size_t j = static_cast<std::size_t>(cell % sp.n2);
    out(i, j) = oracle.query(i, j);
  }
  return out;
}

QueryCost query_cost(const ApproxParams& params, bool iterated) {
  validate(params, false);
  const std::uint64_t n1 = params.sp.n1;
  const std::uint64_t n2 = params.sp.n2;
  const std::uint64_t m = params.m;
  QueryCost cost;
  cost.exact = m * n1 * ceil_div(params.n, n1) + ceil_div(params.n, n2) * n2;
  cost.bound = (m + 1) * params.n + m * n1 + n2;
  if (iterated) {
    cost.exact *= 2;
    cost.bound *= 2;
  }
  return cost;
}

}  // namespace vva
