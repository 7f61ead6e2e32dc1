#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "info_oracle.hpp"
#include "matrix.hpp"
#include "mixed_norm.hpp"
#include "random_stream.hpp"

namespace vva {

// Parameters of one adaptive approximation run: information budget n and
// median repetition count m over the given space pair.
struct ApproxParams {
  SpacePair sp;
  std::uint64_t n = 1;  // information budget; must be < N1*N2 for a2/a3
  std::uint32_t m = 1;  // median repetitions
};

// Default repetition count ceil(11.1 * log2(N1 + N2)); large enough that
// the per-row failure probability is negligible against N1 + N2.
std::uint32_t default_repetitions(std::size_t n1, std::size_t n2);

// Median of a non-empty vector: middle element of the sorted values for
// odd length, mean of the two middle elements for even length.
double median_of(std::span<const double> values);

// Monte Carlo estimate of the inner v-norm of one row from k point
// samples: ((1/k) sum |f(row, idx)|^v)^(1/v). Requires v < inf. Consumes
// exactly k oracle queries; the caller supplies the sampled column
// indices (i.i.d. uniform draws).
double sampled_norm_estimate(InfoOracle& oracle, std::size_t row, Exponent v,
                             std::span<const std::size_t> indices);

// Per-row boosted norm estimates: raw estimates a (N1 x m), their
// row-wise medians, and the descending rank permutation (stable,
// ties broken by ascending row index).
struct RowEstimates {
  std::vector<double> a;          // row-major N1 x m
  std::vector<double> medians;    // length N1
  std::vector<std::size_t> rank;  // rank[k] = row with k-th largest median

  double raw(std::size_t row, std::size_t k, std::size_t m) const {
    return a[row * m + k];
  }
};

// Draws a shared ceil(n/N1) x m table of uniform column indices (the same
// table for every row), forms m independent sampled v-norm estimates per
// row, and boosts them by the median. Consumes exactly
// m * N1 * ceil(n/N1) queries.
RowEstimates estimate_row_norms(InfoOracle& oracle, const ApproxParams& params,
                                RandomStream& stream);

// Adaptive approximation: ranks rows by boosted norm estimates, then reads
// the top ceil(n/N2) rows entirely and outputs them verbatim, zero
// elsewhere. Consumes exactly m*N1*ceil(n/N1) + ceil(n/N2)*N2 queries.
Matrix approx_a2(InfoOracle& oracle, const ApproxParams& params,
                 RandomStream& stream);

// Iterated variant: a second a2 pass runs on the residual f minus the
// first-pass output (each residual query costs one oracle query; the
// first-pass output is held in memory). Consumes exactly twice the a2
// query count.
Matrix approx_a3(InfoOracle& oracle, const ApproxParams& params,
                 RandomStream& stream);

// Routing rule: zero output when p >= q or u <= v (the zero algorithm is
// already order-optimal there); full read when n >= N1*N2; otherwise a2
// when 1/v - 1/u <= 1/2 and a3 when 1/v - 1/u > 1/2.
Matrix approx_dispatch(InfoOracle& oracle, const ApproxParams& params,
                       RandomStream& stream);

// Zero matrix, zero queries.
Matrix zero_approximation(const SpacePair& sp);

// Non-adaptive baseline: reads rows 0 .. floor(n/N2)-1 entirely, zero
// elsewhere. Exactly floor(n/N2)*N2 queries.
Matrix approx_fixed_rows(InfoOracle& oracle, const SpacePair& sp,
                         std::uint64_t n);

// Non-adaptive baseline: draws min(n, N1*N2) distinct cells uniformly
// before any query, reads them, zero elsewhere.
Matrix approx_random_cells(InfoOracle& oracle, const SpacePair& sp,
                           std::uint64_t n, RandomStream& stream);

// Exact query count of one a2 run (doubled when iterated), together with
// the closed-form upper bound (m+1)n + m*N1 + N2 (also doubled).
struct QueryCost {
  std::uint64_t exact = 0;
  std::uint64_t bound = 0;
};

QueryCost query_cost(const ApproxParams& params, bool iterated);

}  // namespace vva
