#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "algorithms.hpp"
#include "hard_instances.hpp"
#include "report.hpp"

namespace vva {

enum class Algorithm {
  dispatch,
  a2,
  a3,
  zero,
  fixed_rows,
  random_cells,
};

Algorithm parse_algorithm(const std::string& name);
const char* algorithm_name(Algorithm algo);

// Monte Carlo error experiment over a budget grid: draws per-trial inputs
// from a hard instance family and measures the output-space error of one
// algorithm.
struct ExperimentConfig {
  SpacePair sp;
  std::vector<std::uint64_t> budgets;  // strictly increasing
  std::uint32_t m_override = 0;        // 0: use default_repetitions
  MeasureFamily measure = MeasureFamily::single_spike;
  Algorithm algorithm = Algorithm::dispatch;
  std::uint32_t trials = 1;
  double moment = 1.0;  // error moment w >= 1
  std::uint64_t master_seed = 0;
  std::uint32_t threads = 1;  // trial-level parallelism; <=1 serial
};

// Upper-bound expression the recorded errors are compared against; the
// adaptive form carries the log2(N1+N2) budget deflation, the
// non-adaptive and degenerate forms are budget-free.
double error_upper_bound(const SpacePair& sp, std::uint64_t n, Algorithm algo);

// One record per budget. Every trial of a cell runs from the substream
// (master_seed, "trial", budget_index * trials + trial); instance draw
// and algorithm randomness consume that stream in order. The rate fit
// over positive-mean cells is attached when at least three qualify.
Report mc_error(const ExperimentConfig& config);

// Repeated single-row norm estimation at several sample counts with a
// fixed target row; records mean absolute estimation error per count.
struct EstimateStudyConfig {
  std::vector<double> row;
  Exponent u;  // rate label only; the estimate itself uses v
  Exponent v;
  std::vector<std::uint64_t> sample_counts;
  std::uint32_t trials = 1;
  std::uint64_t master_seed = 0;
};

Report estimate_study(const EstimateStudyConfig& config);

// Adaptive/non-adaptive comparison: for each budget n >= 64 the grid is
// square with N1 = N2 = floor(sqrt(21 n)) + 1, input space L_1(L_inf),
// output space L_inf(L_1), inputs drawn from the hidden-row family.
// Runs dispatch (routing to a3), fixed_rows, random_cells and zero on
// shared per-trial draws and reports, per budget, the ratio of the best
// non-adaptive mean error to the adaptive mean error (denominator floored
// by machine epsilon).
struct GapConfig {
  std::vector<std::uint64_t> budgets;
  std::uint32_t trials = 1;
  std::uint64_t master_seed = 0;
  std::uint32_t threads = 1;
};

Report gap_experiment(const GapConfig& config);

}  // namespace vva
