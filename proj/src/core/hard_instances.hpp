#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "matrix.hpp"
#include "mixed_norm.hpp"
#include "random_stream.hpp"

namespace vva {

// Contiguous equal-width blocks D_0, ..., D_{L-1} of {0, ..., n2-1}:
// D_j = {j*w, ..., (j+1)*w - 1} with w = floor(n2/L). Trailing columns
// beyond L*w stay unused. Widths satisfy n2/(2L) < w <= n2/L.
struct BlockPartition {
  std::size_t n2 = 0;
  std::size_t count = 0;  // L
  std::size_t width = 0;  // floor(n2 / L)

  std::size_t block_begin(std::size_t j) const { return j * width; }
  std::size_t block_end(std::size_t j) const { return (j + 1) * width; }
};

BlockPartition make_blocks(std::size_t n2, std::size_t count);

// The six lower-bound input distributions, all supported in the unit ball
// of the (p, u) mixed-norm space and tuned against a query budget n:
//   1  single spiked block: uniform over +-psi_ij, psi_ij carried by one
//      block D_j of one row i, L = floor(4n/N1) + 1
//   2  dense sign pattern on the first M = floor(4n/N2) + 1 rows
//   3  family 1 re-tuned at the saturation budget ceil(N1*N2/21) - 1
//   4  family 2 re-tuned at the saturation budget
//   5  independent signed block spike in every row, L = 4*ceil(4n/N1) + 1
//   6  one uniformly hidden row carrying a full sign pattern over the
//      blocks of family 5
enum class MeasureFamily : int {
  single_spike = 1,
  dense_rows = 2,
  single_spike_saturated = 3,
  dense_rows_saturated = 4,
  spike_per_row = 5,
  hidden_row = 6,
};

struct HardInstanceSpec {
  MeasureFamily family = MeasureFamily::single_spike;
  SpacePair sp;
  std::uint64_t n = 1;            // budget the measure is tuned against
  std::uint64_t effective_n = 1;  // n, or the saturation budget for 3/4
  BlockPartition blocks;          // families 1/3/5/6
  std::size_t active_rows = 0;    // families 2/4: M
  double amplitude = 0.0;         // magnitude of every nonzero entry
};

// Largest admissible tuning budget for an N1 x N2 grid
// (ceil(N1*N2/21) - 1), or 0 when the grid is too small for any budget.
std::uint64_t max_tuning_budget(std::size_t n1, std::size_t n2);

// Validates 21*n < N1*N2 and the family-specific block feasibility, and
// precomputes the derived quantities.
HardInstanceSpec make_hard_instance_spec(MeasureFamily family,
                                         const SpacePair& sp, std::uint64_t n);

// One draw from the selected distribution. Draw order is fixed per family
// (documented in the implementation), so a given (spec, stream) pair
// always yields the same matrix.
Matrix sample_instance(const HardInstanceSpec& spec, RandomStream& stream);

// Norm of one signed building block of the family measured in the output
// space (q, v); every block of a family has the same norm.
double instance_unit_norm(const HardInstanceSpec& spec);

// The unsigned building blocks of families 1 and 2 as explicit matrices
// (for exact enumeration on tiny instances). Families 3/4 delegate to
// their non-saturated versions. Size is N1*L resp. M*N2.
std::vector<Matrix> instance_system(const HardInstanceSpec& spec);

// Exact Rademacher mean norm: the average of
// mixed_norm(sum_{i in subset} sigma_i * vectors[i]; q, v) over all sign
// patterns sigma. Enumeration is capped at |subset| <= 20.
double rademacher_mean_norm_exact(const std::vector<Matrix>& vectors,
                                  const std::vector<std::size_t>& subset,
                                  Exponent q, Exponent v);

// Average-case error lower bound produced by the family's construction,
// evaluated against eval_budget queries:
//   families 1/3: half the norm of one building block (requires
//                 4*eval_budget < N1*L)
//   families 2/4: half the minimum, over all cell subsets of size
//                 M*N2 - 2*eval_budget, of the exact Rademacher mean norm
//                 (requires 4*eval_budget < M*N2; exhaustive, tiny
//                 instances only)
// Returns nullopt when the 4*eval_budget condition fails.
std::optional<double> average_case_lower_bound(const HardInstanceSpec& spec,
                                               std::uint64_t eval_budget);

}  // namespace vva
