#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "algorithms.hpp"
#include "experiments.hpp"
#include "hard_instances.hpp"
#include "info_oracle.hpp"
#include "matrix.hpp"
#include "mixed_norm.hpp"
#include "random_stream.hpp"
#include "report.hpp"

namespace vva {

namespace {

constexpr double kRelTol = 1e-12;

Matrix random_matrix(RandomStream& stream, std::size_t n1, std::size_t n2,
                     double scale = 2.0) {
  Matrix m(n1, n2);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      m(i, j) = scale * (stream.next_real() - 0.5);
    }
  }
  return m;
}

Exponent random_exponent(RandomStream& stream) {
  static const double values[] = {1.0, 1.5, 2.0, 3.0, 8.0};
  const std::uint64_t pick = stream.uniform_below(6);
  if (pick == 5) return Exponent::infinity();
  return Exponent::from_value(values[pick]);
}

bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

bool check_norm_axioms(std::uint64_t seed) {
  RandomStream stream(seed, "selftest-norms", 0);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n1 = 1 + stream.uniform_below(8);
    const std::size_t n2 = 1 + stream.uniform_below(8);
    const Exponent p = random_exponent(stream);
    const Exponent u = random_exponent(stream);
    const Exponent q = random_exponent(stream);
    const Exponent v = random_exponent(stream);
    const Matrix f = random_matrix(stream, n1, n2);
    const Matrix g = random_matrix(stream, n1, n2);
    const double alpha = 4.0 * (stream.next_real() - 0.5);

    const double nf = mixed_norm(f, p, u);
    if (!close_rel(mixed_norm(alpha * f, p, u), std::fabs(alpha) * nf,
                   kRelTol)) {
      return false;
    }
    if (mixed_norm(f + g, p, u) > nf + mixed_norm(g, p, u) + kRelTol) {
      return false;
    }
    const double flat = inner_norm(f.entries(), p);
    if (!close_rel(mixed_norm(f, p, p), flat, kRelTol)) return false;

    SpacePair sp{n1, n2, p, u, q, v};
    if (mixed_norm(f, q, v) >
        embedding_norm(sp) * nf * (1.0 + kRelTol)) {
      return false;
    }
  }
  // Power-mean monotonicity over exponent pairs.
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n2 = 1 + stream.uniform_below(12);
    Matrix row = random_matrix(stream, 1, n2);
    Exponent a = random_exponent(stream);
    Exponent b = random_exponent(stream);
    if (b <= a) std::swap(a, b);
    if (inner_norm(row.row(0), a) >
        inner_norm(row.row(0), b) * (1.0 + kRelTol)) {
      return false;
    }
  }
  return true;
}

bool check_median(std::uint64_t seed) {
  const std::vector<double> single{5.0};
  if (median_of(single) != 5.0) return false;
  const std::vector<double> odd{1.0, 3.0, 2.0};
  if (median_of(odd) != 2.0) return false;
  const std::vector<double> even{1.0, 2.0, 3.0, 4.0};
  if (median_of(even) != 2.5) return false;

  RandomStream stream(seed, "selftest-median", 0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> values(1 + stream.uniform_below(15));
    for (double& x : values) x = stream.next_real();
    const double med = median_of(values);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (med < *lo || med > *hi) return false;
    std::vector<double> shuffled = values;
    for (std::size_t k = shuffled.size(); k > 1; --k) {
      std::swap(shuffled[k - 1], shuffled[stream.uniform_below(k)]);
    }
    if (median_of(shuffled) != med) return false;
  }
  return true;
}

bool check_streams(std::uint64_t seed) {
  RandomStream a(seed, "x", 3), b(seed, "x", 3), c(seed, "y", 3);
  bool all_equal = true;
  bool any_diff = false;
  for (int t = 0; t < 1000; ++t) {
    const std::uint64_t va = a.next_u64();
    if (va != b.next_u64()) all_equal = false;
    if (va != c.next_u64()) any_diff = true;
  }
  if (!all_equal || !any_diff) return false;

  RandomStream s(seed, "freq", 0);
  const int draws = 100000;
  int counts[4] = {0, 0, 0, 0};
  for (int t = 0; t < draws; ++t) ++counts[s.uniform_below(4)];
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  for (int c4 : counts) {
    if (std::fabs(c4 - draws * 0.25) > 4.0 * sigma) return false;
  }
  return true;
}

bool check_query_accounting(std::uint64_t seed) {
  RandomStream stream(seed, "selftest-count", 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n1 = 1 + stream.uniform_below(10);
    const std::size_t n2 = 1 + stream.uniform_below(10);
    if (n1 * n2 < 2) continue;
    const std::uint64_t n = 1 + stream.uniform_below(n1 * n2 - 1);
    const std::uint32_t m = 1 + stream.uniform_below(6);
    SpacePair sp{n1, n2, Exponent::one(), Exponent::from_value(2.0),
                 Exponent::from_value(2.0), Exponent::one()};
    const ApproxParams params{sp, n, m};
    const Matrix f = random_matrix(stream, n1, n2);

    const QueryCost cost2 = query_cost(params, false);
    InfoOracle oracle2(f, cost2.bound);
    approx_a2(oracle2, params, stream);
    if (oracle2.count() != cost2.exact || cost2.exact > cost2.bound) {
      return false;
    }

    const QueryCost cost3 = query_cost(params, true);
    InfoOracle oracle3(f, cost3.bound);
    approx_a3(oracle3, params, stream);
    if (oracle3.count() != cost3.exact || cost3.exact != 2 * cost2.exact) {
      return false;
    }
  }

  Matrix tiny(1, 1);
  tiny(0, 0) = 7.0;
  InfoOracle fresh(tiny);
  if (fresh.query(0, 0) != 7.0 || fresh.count() != 1) return false;
  InfoOracle budgeted(tiny, 2);
  budgeted.query(0, 0);
  budgeted.query(0, 0);
  try {
    budgeted.query(0, 0);
    return false;
  } catch (const BudgetError&) {
  }
  try {
    fresh.query(1, 0);
    return false;
  } catch (const std::out_of_range&) {
  }
  return true;
}

bool check_output_structure(std::uint64_t seed) {
  RandomStream stream(seed, "selftest-structure", 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n1 = 2 + stream.uniform_below(8);
    const std::size_t n2 = 2 + stream.uniform_below(8);
    const std::uint64_t n = 1 + stream.uniform_below(n1 * n2 - 1);
    SpacePair sp{n1, n2, Exponent::one(), Exponent::from_value(2.0),
                 Exponent::from_value(2.0), Exponent::one()};
    const Matrix f = random_matrix(stream, n1, n2);
    InfoOracle oracle(f);
    const Matrix out = approx_a2(oracle, ApproxParams{sp, n, 3}, stream);
    for (std::size_t i = 0; i < n1; ++i) {
      bool identical = true, zero = true;
      for (std::size_t j = 0; j < n2; ++j) {
        if (out(i, j) != f(i, j)) identical = false;
        if (out(i, j) != 0.0) zero = false;
      }
      if (!identical && !zero) return false;
    }
  }
  return true;
}

bool check_exact_recovery(std::uint64_t seed) {
  RandomStream stream(seed, "selftest-recovery", 0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n1 = 4 + stream.uniform_below(6);
    const std::size_t n2 = 4 + stream.uniform_below(6);
    const std::uint64_t n = n2 + stream.uniform_below(n1 * n2 - n2 - 1);
    const std::size_t keep = static_cast<std::size_t>((n + n2 - 1) / n2);
    const std::size_t support = 1 + stream.uniform_below(keep);
    Matrix f = Matrix::zero(n1, n2);
    for (std::size_t s = 0; s < support; ++s) {
      const std::size_t row = stream.uniform_below(n1);
      for (std::size_t j = 0; j < n2; ++j) {
        f(row, j) = 0.5 + stream.next_real();
      }
    }
    SpacePair sp{n1, n2, Exponent::one(), Exponent::from_value(2.0),
                 Exponent::from_value(2.0), Exponent::one()};
    InfoOracle oracle(f);
    const Matrix out = approx_a2(oracle, ApproxParams{sp, n, 5}, stream);
    if (!(out == f)) return false;
  }
  return true;
}

bool check_unit_ball(std::uint64_t seed) {
  const std::size_t side = 24;
  const std::uint64_t n = 20;
  const double ps[] = {1.0, 2.0, INFINITY};
  const double us[] = {1.0, 2.0, INFINITY};
  for (double pv : ps) {
    for (double uv : us) {
      SpacePair sp{side, side, Exponent::from_value(pv),
                   Exponent::from_value(uv), Exponent::from_value(2.0),
                   Exponent::one()};
      for (int family = 1; family <= 6; ++family) {
        const HardInstanceSpec spec = make_hard_instance_spec(
            static_cast<MeasureFamily>(family), sp, n);
        for (std::uint64_t draw = 0; draw < 300; ++draw) {
          RandomStream stream(seed, "selftest-ball", draw * 64 + family);
          const Matrix f = sample_instance(spec, stream);
          if (mixed_norm(f, sp.p, sp.u) > 1.0 + kRelTol) return false;
        }
      }
    }
  }
  return true;
}

bool check_estimator(std::uint64_t seed) {
  Matrix constant(1, 16, 3.0);
  {
    RandomStream stream(seed, "selftest-est", 0);
    std::vector<std::size_t> indices(9);
    for (auto& ix : indices) ix = stream.uniform_below(16);
    InfoOracle oracle(constant);
    const double est =
        sampled_norm_estimate(oracle, 0, Exponent::from_value(2.0), indices);
    if (!close_rel(est, 3.0, kRelTol)) return false;
    if (oracle.count() != indices.size()) return false;
  }

  // Mean of |f| over uniform draws is unbiased for the L1 norm.
  Matrix sparse(1, 4);
  sparse(0, 0) = 1.0;
  const int trials = 100000;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    RandomStream stream(seed, "selftest-unbiased", t);
    std::vector<std::size_t> indices{
        static_cast<std::size_t>(stream.uniform_below(4))};
    InfoOracle oracle(sparse);
    sum += sampled_norm_estimate(oracle, 0, Exponent::one(), indices);
  }
  const double mean = sum / trials;
  const double sigma = std::sqrt(0.25 * 0.75 / trials);
  return std::fabs(mean - 0.25) <= 4.0 * sigma;
}

bool check_determinism(std::uint64_t seed) {
  ExperimentConfig config;
  config.sp = SpacePair{24, 24, Exponent::one(), Exponent::from_value(2.0),
                        Exponent::from_value(2.0), Exponent::one()};
  config.budgets = {24, 48, 96};
  config.measure = MeasureFamily::single_spike;
  config.algorithm = Algorithm::dispatch;
  config.trials = 10;
  config.master_seed = seed;
  config.threads = 1;
  const std::string serial =
      report_to_string(mc_error(config), ReportFormat::csv);
  config.threads = 2;
  const std::string parallel =
      report_to_string(mc_error(config), ReportFormat::csv);
  if (serial != parallel) return false;

  GapConfig gap{{64}, 5, seed, 2};
  const std::string gap_a = report_to_string(gap_experiment(gap), ReportFormat::csv);
  const std::string gap_b = report_to_string(gap_experiment(gap), ReportFormat::csv);
  return gap_a == gap_b;
}

bool check_serialization(std::uint64_t seed) {
  Report empty;
  const std::string csv = report_to_string(empty, ReportFormat::csv);
  if (csv != "experiment,n,N1,N2,p,q,u,v,m,trials,mean_error,std_error,"
             "w_moment_error,query_count,bound_value,seed\n") {
    return false;
  }

  Report report;
  ReportRecord r;
  r.experiment = "rates:a2";
  r.n = 128;
  r.n1 = 16;
  r.n2 = 32;
  r.p = Exponent::one();
  r.q = Exponent::from_value(2.0);
  r.u = Exponent::infinity();
  r.v = Exponent::one();
  r.m = 7;
  r.trials = 3;
  r.mean_error = 0.123456789012345;
  r.std_error = 0.001;
  r.w_moment_error = 0.2;
  r.query_count = 999;
  r.bound_value = 3.5;
  r.seed = seed;
  report.records.push_back(r);

  const Report parsed =
      parse_report_json(report_to_string(report, ReportFormat::json));
  if (parsed.records.size() != 1) return false;
  const ReportRecord& s = parsed.records[0];
  return s.experiment == r.experiment && s.n == r.n && s.n1 == r.n1 &&
         s.n2 == r.n2 && s.p == r.p && s.q == r.q && s.u == r.u &&
         s.v == r.v && s.m == r.m && s.trials == r.trials &&
         s.mean_error == r.mean_error && s.std_error == r.std_error &&
         s.w_moment_error == r.w_moment_error &&
         s.query_count == r.query_count && s.bound_value == r.bound_value &&
         s.seed == r.seed;
}

}  // namespace

int selftest(std::uint64_t seed, bool verbose, std::ostream& out) {
  const std::pair<const char*, std::function<bool(std::uint64_t)>> checks[] = {
      {"norm axioms", check_norm_axioms},
      {"median", check_median},
      {"random streams", check_streams},
      {"query accounting", check_query_accounting},
      {"output structure", check_output_structure},
      {"exact recovery", check_exact_recovery},
      {"unit ball membership", check_unit_ball},
      {"norm estimator", check_estimator},
      {"determinism", check_determinism},
      {"report serialization", check_serialization},
  };
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    bool ok = false;
    std::string detail;
    try {
      ok = fn(seed);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    if (!ok) ++failures;
    if (verbose || !ok) {
      out << "selftest: " << name << " ... " << (ok ? "ok" : "FAIL");
      if (!detail.empty()) out << " (" << detail << ")";
      out << '\n';
    }
  }
  return failures;
}

}  // namespace vva
