#include "hard_instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace vva {

namespace {

constexpr double kBudgetFraction = 1.0 / 21.0;  // c0

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return (a + b - 1) / b;
}

double pow_size(std::size_t base, double e) {
  return std::pow(static_cast<double>(base), e);
}

bool is_block_family(MeasureFamily f) {
  return f == MeasureFamily::single_spike ||
         f == MeasureFamily::single_spike_saturated ||
         f == MeasureFamily::spike_per_row || f == MeasureFamily::hidden_row;
}

}  // namespace

BlockPartition make_blocks(std::size_t n2, std::size_t count) {
  if (count < 1 || count > n2) {
    throw std::invalid_argument("block count must satisfy 1 <= L <= n2");
  }
  BlockPartition part;
  part.n2 = n2;
  part.count = count;
  part.width = n2 / count;
  return part;
}

std::uint64_t max_tuning_budget(std::size_t n1, std::size_t n2) {
  const std::uint64_t grid = static_cast<std::uint64_t>(n1) * n2;
  if (grid <= 21) return 0;
  return ceil_div(grid, 21) - 1;  // ceil(c0 * N1 * N2) - 1
}

HardInstanceSpec make_hard_instance_spec(MeasureFamily family,
                                         const SpacePair& sp,
                                         std::uint64_t n) {
  const std::uint64_t grid = static_cast<std::uint64_t>(sp.n1) * sp.n2;
  if (n < 1 || 21 * n >= grid) {
    throw std::invalid_argument(
        "hard instance requires 1 <= n < N1*N2/21 (got n=" +
        std::to_string(n) + ", grid=" + std::to_string(grid) + ")");
  }

  HardInstanceSpec spec;
  spec.family = family;
  spec.sp = sp;
  spec.n = n;
  spec.effective_n = n;
  if (family == MeasureFamily::single_spike_saturated ||
      family == MeasureFamily::dense_rows_saturated) {
    spec.effective_n = max_tuning_budget(sp.n1, sp.n2);
  }

  const double rp = sp.p.reciprocal();
  const double ru = sp.u.reciprocal();
  switch (family) {
    case MeasureFamily::single_spike:
    case MeasureFamily::single_spike_saturated: {
      const std::uint64_t count = 4 * spec.effective_n / sp.n1 + 1;
      if (count > sp.n2) {
        throw std::invalid_argument("block count exceeds N2");
      }
      spec.blocks = make_blocks(sp.n2, static_cast<std::size_t>(count));
      spec.amplitude = pow_size(sp.n1, rp) * pow_size(sp.n2, ru) *
                       pow_size(spec.blocks.width, -ru);
      break;
    }
    case MeasureFamily::dense_rows:
    case MeasureFamily::dense_rows_saturated: {
      const std::uint64_t rows = 4 * spec.effective_n / sp.n2 + 1;
      if (rows > sp.n1) {
        throw std::invalid_argument("active row count exceeds N1");
      }
      spec.active_rows = static_cast<std::size_t>(rows);
      spec.amplitude = pow_size(sp.n1, rp) * pow_size(spec.active_rows, -rp);
      break;
    }
    case MeasureFamily::spike_per_row:
    case MeasureFamily::hidden_row: {
      const std::uint64_t count = 4 * ceil_div(4 * spec.effective_n, sp.n1) + 1;
      if (count > sp.n2) {
        throw std::invalid_argument(
            "block count exceeds N2 (needs larger N2 or smaller n)");
      }
      spec.blocks = make_blocks(sp.n2, static_cast<std::size_t>(count));
      spec.amplitude =
          family == MeasureFamily::spike_per_row
              ? pow_size(sp.n2, ru) * pow_size(spec.blocks.width, -ru)
              : pow_size(sp.n1, rp);
      break;
    }
  }
  return spec;
}

// Draw order, fixed for reproducibility:
//   1/3: row index, block index, sign
//   2/4: signs row-major over the M x N2 active cells
//   5:   per row (ascending): block index, sign
//   6:   hidden row index, then one sign per block (ascending)
Matrix sample_instance(const HardInstanceSpec& spec, RandomStream& stream) {
  const SpacePair& sp = spec.sp;
  Matrix f = Matrix::zero(sp.n1, sp.n2);
  switch (spec.family) {
    case MeasureFamily::single_spike:
    case MeasureFamily::single_spike_saturated: {
      const std::size_t row =
          static_cast<std::size_t>(stream.uniform_below(sp.n1));
      const std::size_t block =
          static_cast<std::size_t>(stream.uniform_below(spec.blocks.count));
      const double value = spec.amplitude * stream.sign();
      for (std::size_t j = spec.blocks.block_begin(block);
           j < spec.blocks.block_end(block); ++j) {
        f(row, j) = value;
      }
      break;
    }
    case MeasureFamily::dense_rows:
    case MeasureFamily::dense_rows_saturated: {
      for (std::size_t i = 0; i < spec.active_rows; ++i) {
        for (std::size_t j = 0; j < sp.n2; ++j) {
          f(i, j) = spec.amplitude * stream.sign();
        }
      }
      break;
    }
    case MeasureFamily::spike_per_row: {
      for (std::size_t i = 0; i < sp.n1; ++i) {
        const std::size_t block =
            static_cast<std::size_t>(stream.uniform_below(spec.blocks.count));
        const double value = spec.amplitude * stream.sign();
        for (std::size_t j = spec.blocks.block_begin(block);
             j < spec.blocks.block_end(block); ++j) {
          f(i, j) = value;
        }
      }
      break;
    }
    case MeasureFamily::hidden_row: {
      const std::size_t row =
          static_cast<std::size_t>(stream.uniform_below(sp.n1));
      for (std::size_t b = 0; b < spec.blocks.count; ++b) {
        const double value = spec.amplitude * stream.sign();
        for (std::size_t j = spec.blocks.block_begin(b);
             j < spec.blocks.block_end(b); ++j) {
          f(row, j) = value;
        }
      }
      break;
    }
  }
  return f;
}

double instance_unit_norm(const HardInstanceSpec& spec) {
  const SpacePair& sp = spec.sp;
  const double rp = sp.p.reciprocal();
  const double rq = sp.q.reciprocal();
  const double ru = sp.u.reciprocal();
  const double rv = sp.v.reciprocal();
  switch (spec.family) {
    case MeasureFamily::single_spike:
    case MeasureFamily::single_spike_saturated:
      // Amplitude on one block of one row.
      return pow_size(sp.n1, rp - rq) * pow_size(sp.n2, ru - rv) *
             pow_size(spec.blocks.width, rv - ru);
    case MeasureFamily::dense_rows:
    case MeasureFamily::dense_rows_saturated:
      // Amplitude on a single cell.
      return spec.amplitude * pow_size(sp.n1, -rq) * pow_size(sp.n2, -rv);
    case MeasureFamily::spike_per_row:
      return pow_size(sp.n1, -rq) * pow_size(sp.n2, ru - rv) *
             pow_size(spec.blocks.width, rv - ru);
    case MeasureFamily::hidden_row:
      return spec.amplitude * pow_size(sp.n1, -rq) *
             pow_size(spec.blocks.width, rv) * pow_size(sp.n2, -rv);
  }
  throw std::logic_error("unreachable");
}

std::vector<Matrix> instance_system(const HardInstanceSpec& spec) {
  const SpacePair& sp = spec.sp;
  std::vector<Matrix> system;
  switch (spec.family) {
    case MeasureFamily::single_spike:
    case MeasureFamily::single_spike_saturated: {
      system.reserve(sp.n1 * spec.blocks.count);
      for (std::size_t i = 0; i < sp.n1; ++i) {
        for (std::size_t b = 0; b < spec.blocks.count; ++b) {
          Matrix psi = Matrix::zero(sp.n1, sp.n2);
          for (std::size_t j = spec.blocks.block_begin(b);
               j < spec.blocks.block_end(b); ++j) {
            psi(i, j) = spec.amplitude;
          }
          system.push_back(std::move(psi));
        }
      }
      break;
    }
    case MeasureFamily::dense_rows:
    case MeasureFamily::dense_rows_saturated: {
      system.reserve(spec.active_rows * sp.n2);
      for (std::size_t i = 0; i < spec.active_rows; ++i) {
        for (std::size_t j = 0; j < sp.n2; ++j) {
          Matrix psi = Matrix::zero(sp.n1, sp.n2);
          psi(i, j) = spec.amplitude;
          system.push_back(std::move(psi));
        }
      }
      break;
    }
    default:
      throw std::invalid_argument(
          "instance_system is defined for families 1-4 only");
  }
  return system;
}

namespace {

// Depth-first walk over sign patterns with per-depth partial sums: every
// pattern's sum is produced by |subset| fresh additions, so no rounding
// drift carries over between patterns.
double signed_sum_norms(const std::vector<Matrix>& vectors,
                        const std::vector<std::size_t>& subset,
                        std::vector<Matrix>& partial, std::size_t depth,
                        Exponent q, Exponent v) {
  if (depth == subset.size()) {
    return mixed_norm(partial[depth], q, v);
  }
  double total = 0.0;
  const Matrix& base = partial[depth];
  const Matrix& step = vectors[subset[depth]];
  partial[depth + 1] = base + step;
  total += signed_sum_norms(vectors, subset, partial, depth + 1, q, v);
  partial[depth + 1] = base - step;
  total += signed_sum_norms(vectors, subset, partial, depth + 1, q, v);
  return total;
}

}  // namespace

double rademacher_mean_norm_exact(const std::vector<Matrix>& vectors,
                                  const std::vector<std::size_t>& subset,
                                  Exponent q, Exponent v) {
  if (subset.empty()) return 0.0;
  if (subset.size() > 20) {
    throw std::length_error("Rademacher enumeration capped at 20 vectors");
  }
  for (std::size_t idx : subset) {
    if (idx >= vectors.size()) {
      throw std::out_of_range("subset index out of range");
    }
  }

  const std::size_t k = subset.size();
  std::vector<Matrix> partial(
      k + 1, Matrix::zero(vectors[0].rows(), vectors[0].cols()));
  const double total = signed_sum_norms(vectors, subset, partial, 0, q, v);
  return total / static_cast<double>(std::uint64_t{1} << k);
}

std::optional<double> average_case_lower_bound(const HardInstanceSpec& spec,
                                               std::uint64_t eval_budget) {
  switch (spec.family) {
    case MeasureFamily::single_spike:
    case MeasureFamily::single_spike_saturated: {
      const std::uint64_t system_size =
          static_cast<std::uint64_t>(spec.sp.n1) * spec.blocks.count;
      if (4 * eval_budget >= system_size) return std::nullopt;
      return 0.5 * instance_unit_norm(spec);
    }
    case MeasureFamily::dense_rows:
    case MeasureFamily::dense_rows_saturated: {
      const std::uint64_t system_size =
          static_cast<std::uint64_t>(spec.active_rows) * spec.sp.n2;
      if (4 * eval_budget >= system_size) return std::nullopt;
      if (system_size > 16) {
        throw std::length_error("exact subset enumeration capped at 16 cells");
      }
      const std::size_t total = static_cast<std::size_t>(system_size);
      const std::size_t keep =
          static_cast<std::size_t>(system_size - 2 * eval_budget);
      const std::vector<Matrix> system = instance_system(spec);

      // The minimum over subsets of size >= total - 2n is attained at size
      // exactly total - 2n; scan all of them.
      double best = std::numeric_limits<double>::infinity();
      std::vector<std::size_t> subset(keep);
      std::vector<bool> chosen(total, false);
      std::fill(chosen.begin(), chosen.begin() + keep, true);
      do {
        std::size_t t = 0;
        for (std::size_t idx = 0; idx < total; ++idx) {
          if (chosen[idx]) subset[t++] = idx;
        }
        best = std::min(best, rademacher_mean_norm_exact(system, subset,
                                                         spec.sp.q, spec.sp.v));
      } while (std::prev_permutation(chosen.begin(), chosen.end()));
      return 0.5 * best;
    }
    default:
      throw std::invalid_argument(
          "lower-bound values are defined for families 1-4 only");
  }
}

}  // namespace vva
