#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "experiments.hpp"
#include "hard_instances.hpp"
#include "matrix_io.hpp"
#include "rate_fit.hpp"
#include "report.hpp"

using namespace vva;

namespace {

SpacePair make_space(std::size_t n1, std::size_t n2, double p, double q,
                     double u, double v) {
  SpacePair sp;
  sp.n1 = n1;
  sp.n2 = n2;
  sp.p = Exponent::from_value(p);
  sp.q = Exponent::from_value(q);
  sp.u = Exponent::from_value(u);
  sp.v = Exponent::from_value(v);
  return sp;
}

}  // namespace

TEST_CASE("rate fit on exact power laws") {
  std::vector<std::pair<std::uint64_t, double>> half;
  for (int k = 4; k <= 10; ++k) {
    half.emplace_back(std::uint64_t{1} << k, std::pow(2.0, -0.5 * k));
  }
  const RateFit fit = fit_rate(half);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.points_used == 7);

  std::vector<std::pair<std::uint64_t, double>> flat;
  for (int k = 4; k <= 8; ++k) flat.emplace_back(std::uint64_t{1} << k, 0.75);
  CHECK(fit_rate(flat).slope == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(
      fit_rate({{16, 1.0}, {32, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(
      fit_rate({{16, 1.0}, {32, 0.0}, {64, 0.5}}), std::invalid_argument);
}

TEST_CASE("algorithm names round-trip") {
  for (Algorithm algo :
       {Algorithm::dispatch, Algorithm::a2, Algorithm::a3, Algorithm::zero,
        Algorithm::fixed_rows, Algorithm::random_cells}) {
    CHECK(parse_algorithm(algorithm_name(algo)) == algo);
  }
  CHECK_THROWS_AS(parse_algorithm("a4"), std::invalid_argument);
}

TEST_CASE("report serialization") {
  Report empty;
  CHECK(report_to_string(empty, ReportFormat::csv) ==
        "experiment,n,N1,N2,p,q,u,v,m,trials,mean_error,std_error,"
        "w_moment_error,query_count,bound_value,seed\n");

  Report one;
  ReportRecord r;
  r.experiment = "rates:a2";
  r.n = 64;
  r.n1 = 8;
  r.n2 = 8;
  r.p = Exponent::one();
  r.q = Exponent::from_value(2.0);
  r.u = Exponent::infinity();
  r.v = Exponent::one();
  r.m = 9;
  r.trials = 11;
  r.mean_error = 1.0 / 3.0;
  r.std_error = 0.25;
  r.w_moment_error = 0.5;
  r.query_count = 1234;
  r.bound_value = 2.0;
  r.seed = 99;
  one.records.push_back(r);

  const std::string csv = report_to_string(one, ReportFormat::csv);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.find("rates:a2,64,8,8,1,2,inf,1,9,11,") != std::string::npos);

  const Report parsed = parse_report_json(
      report_to_string(one, ReportFormat::json));
  REQUIRE(parsed.records.size() == 1);
  const ReportRecord& s = parsed.records[0];
  CHECK(s.experiment == r.experiment);
  CHECK(s.n == r.n);
  CHECK(s.p == r.p);
  CHECK(s.u == r.u);
  CHECK(s.mean_error == r.mean_error);  // bit-exact round trip
  CHECK(s.std_error == r.std_error);
  CHECK(s.query_count == r.query_count);
  CHECK(s.bound_value == r.bound_value);
  CHECK(s.seed == r.seed);
}

TEST_CASE("exponent text forms") {
  CHECK(format_exponent(Exponent::infinity()) == "inf");
  CHECK(format_exponent(Exponent::from_value(2.0)) == "2");
  CHECK(parse_exponent("inf").is_infinite());
  CHECK(parse_exponent("2.5").value() == doctest::Approx(2.5));
  CHECK_THROWS_AS(parse_exponent("zero"), std::invalid_argument);
  CHECK_THROWS_AS(parse_exponent("0.5"), std::invalid_argument);
}

TEST_CASE("matrix file round trip") {
  Matrix m(2, 3);
  m(0, 0) = 1.5;
  m(0, 1) = -2.25;
  m(0, 2) = 1.0 / 3.0;
  m(1, 0) = 0.0;
  m(1, 1) = 1e-17;
  m(1, 2) = 123456.789;
  std::stringstream buffer;
  write_matrix(buffer, m);
  const Matrix back = read_matrix(buffer);
  CHECK(back == m);

  std::stringstream bad("3 0\n");
  CHECK_THROWS_AS(read_matrix(bad), IoError);
  std::stringstream truncated("2 2\n1 2 3\n");
  CHECK_THROWS_AS(read_matrix(truncated), IoError);
}

TEST_CASE("mc_error with the zero algorithm on single-spike inputs") {
  ExperimentConfig config;
  config.sp = make_space(16, 16, 1, 2, 2, 1);
  config.budgets = {8};
  config.measure = MeasureFamily::single_spike;
  config.algorithm = Algorithm::zero;
  config.trials = 40;
  config.master_seed = 31;
  const Report report = mc_error(config);
  REQUIRE(report.records.size() == 1);

  // Every +-psi draw has the same output-space norm, so the per-trial
  // error is constant and the spread vanishes.
  const HardInstanceSpec spec =
      make_hard_instance_spec(MeasureFamily::single_spike, config.sp, 8);
  CHECK(report.records[0].mean_error ==
        doctest::Approx(instance_unit_norm(spec)).epsilon(1e-12));
  // All per-trial errors are equal; the spread is rounding noise only.
  CHECK(report.records[0].std_error <= 1e-12 * report.records[0].mean_error);
  CHECK(report.records[0].query_count == 0);
}

TEST_CASE("dispatch on degenerate exponents matches the zero algorithm") {
  ExperimentConfig config;
  config.sp = make_space(16, 16, 2, 1, 2, 1);  // p >= q
  config.budgets = {8, 16};
  config.measure = MeasureFamily::single_spike;
  config.algorithm = Algorithm::dispatch;
  config.trials = 25;
  config.master_seed = 5;
  const Report dispatch_report = mc_error(config);
  config.algorithm = Algorithm::zero;
  const Report zero_report = mc_error(config);
  REQUIRE(dispatch_report.records.size() == zero_report.records.size());
  for (std::size_t i = 0; i < zero_report.records.size(); ++i) {
    CHECK(dispatch_report.records[i].mean_error ==
          zero_report.records[i].mean_error);
    CHECK(dispatch_report.records[i].query_count == 0);
  }
}

TEST_CASE("mc_error reports the exact adaptive query counts") {
  ExperimentConfig config;
  config.sp = make_space(16, 16, 1, 2, 2, 1);
  config.budgets = {8, 32, 64};
  config.measure = MeasureFamily::single_spike;
  config.algorithm = Algorithm::a2;
  config.trials = 10;
  config.m_override = 5;
  config.master_seed = 77;
  const Report report = mc_error(config);
  for (const ReportRecord& r : report.records) {
    const ApproxParams params{config.sp, r.n, 5};
    CHECK(r.query_count == query_cost(params, false).exact);
  }

  config.algorithm = Algorithm::a3;
  const Report iterated = mc_error(config);
  for (std::size_t i = 0; i < iterated.records.size(); ++i) {
    CHECK(iterated.records[i].query_count ==
          2 * report.records[i].query_count);
  }
}

TEST_CASE("adaptive run recovers hidden-row draws exactly") {
  ExperimentConfig config;
  config.sp = make_space(24, 24, 1, INFINITY, INFINITY, 1);
  config.budgets = {25};
  config.measure = MeasureFamily::hidden_row;
  config.algorithm = Algorithm::a2;
  config.trials = 30;
  config.master_seed = 13;
  const Report report = mc_error(config);
  CHECK(report.records[0].mean_error == 0.0);
  CHECK(report.fit_zero_cells_excluded == 1);
  CHECK_FALSE(report.fit.has_value());
}

TEST_CASE("mc_error validation") {
  ExperimentConfig config;
  config.sp = make_space(16, 16, 1, 2, 2, 1);
  config.budgets = {8, 8};
  config.measure = MeasureFamily::single_spike;
  config.trials = 2;
  CHECK_THROWS_AS(mc_error(config), std::invalid_argument);
  config.budgets = {8};
  config.moment = 0.5;
  CHECK_THROWS_AS(mc_error(config), std::invalid_argument);
  config.moment = 1.0;
  config.trials = 0;
  CHECK_THROWS_AS(mc_error(config), std::invalid_argument);
}

TEST_CASE("moment root generalizes the mean") {
  ExperimentConfig config;
  config.sp = make_space(16, 16, 1, 2, 2, 1);
  config.budgets = {8};
  config.measure = MeasureFamily::single_spike;
  config.algorithm = Algorithm::zero;
  config.trials = 20;
  config.master_seed = 3;
  config.moment = 2.0;
  const Report report = mc_error(config);
  // Constant per-trial errors: the second-moment root equals the mean.
  CHECK(report.records[0].w_moment_error ==
        doctest::Approx(report.records[0].mean_error).epsilon(1e-12));
}

TEST_CASE("reports are identical across thread counts and reruns") {
  ExperimentConfig config;
  config.sp = make_space(32, 32, 1, 2, 2, 1);
  config.budgets = {32, 64, 128};
  config.measure = MeasureFamily::single_spike;
  config.algorithm = Algorithm::dispatch;
  config.trials = 12;
  config.master_seed = 2025;
  config.threads = 1;
  const std::string serial = report_to_string(mc_error(config),
                                              ReportFormat::csv);
  config.threads = 2;
  const std::string threaded = report_to_string(mc_error(config),
                                                ReportFormat::csv);
  const std::string threaded_again = report_to_string(mc_error(config),
                                                      ReportFormat::csv);
  CHECK(serial == threaded);
  CHECK(threaded == threaded_again);
}

TEST_CASE("gap experiment structure and hidden-row norms") {
  GapConfig config;
  config.budgets = {64, 128};
  config.trials = 8;
  config.master_seed = 17;
  const Report report = gap_experiment(config);
  REQUIRE(report.records.size() == 8);  // 4 algorithms per budget
  REQUIRE(report.gap_points.size() == 2);

  for (const GapPoint& point : report.gap_points) CHECK(point.ratio > 0.0);

  // The zero-algorithm record: every hidden-row draw has L_inf(L_1) norm
  // exactly L*w (amplitude N1 on L*w cells of one row, divided by N2 = N1).
  const std::size_t side = static_cast<std::size_t>(std::sqrt(21.0 * 64)) + 1;
  SpacePair sp = make_space(side, side, 1, INFINITY, INFINITY, 1);
  const HardInstanceSpec spec =
      make_hard_instance_spec(MeasureFamily::hidden_row, sp, 64);
  const double expected =
      static_cast<double>(spec.blocks.count * spec.blocks.width);
  for (const ReportRecord& r : report.records) {
    if (r.n == 64 && r.experiment == "gap:zero") {
      CHECK(r.mean_error == doctest::Approx(expected).epsilon(1e-12));
      CHECK(r.std_error == 0.0);
      CHECK(r.query_count == 0);
    }
    if (r.experiment == "gap:dispatch") {
      // Routed to the iterated algorithm.
      const ApproxParams params{sp, r.n, r.m};
      if (r.n == 64) {
        CHECK(r.query_count == query_cost(params, true).exact);
      }
    }
  }

  CHECK_THROWS_AS(gap_experiment(GapConfig{{32}, 4, 0, 1}),
                  std::invalid_argument);
}

TEST_CASE("gap reports are reproducible across thread counts") {
  GapConfig config;
  config.budgets = {64};
  config.trials = 6;
  config.master_seed = 29;
  config.threads = 1;
  const std::string serial =
      report_to_string(gap_experiment(config), ReportFormat::csv);
  config.threads = 2;
  const std::string threaded =
      report_to_string(gap_experiment(config), ReportFormat::csv);
  CHECK(serial == threaded);
}

TEST_CASE("estimate study records and fit") {
  EstimateStudyConfig config;
  config.row.assign(64, 0.0);
  for (std::size_t j = 0; j < 32; ++j) config.row[j] = 1.0;
  config.u = Exponent::infinity();
  config.v = Exponent::one();
  config.sample_counts = {16, 32, 64, 128};
  config.trials = 400;
  config.master_seed = 41;
  const Report report = estimate_study(config);
  REQUIRE(report.records.size() == 4);
  for (const ReportRecord& r : report.records) {
    CHECK(r.experiment == "estimate");
    CHECK(r.query_count == r.n);
    CHECK(r.mean_error >= 0.0);
  }
  REQUIRE(report.fit.has_value());
  // Half-ones row: the error of the sample mean decays like k^(-1/2).
  CHECK(report.fit->slope < 0.0);
}

TEST_CASE("upper-bound expression shapes") {
  const SpacePair adaptive = make_space(256, 256, 1, 2, 2, 1);
  // log2(512) = 9: the deflated budget saturates the ceiling at small n.
  CHECK(error_upper_bound(adaptive, 1024, Algorithm::dispatch) ==
        doctest::Approx(32.0).epsilon(1e-12));
  CHECK(error_upper_bound(adaptive, 1 << 15, Algorithm::dispatch) ==
        doctest::Approx(32.0 / std::sqrt(15.0)).epsilon(1e-12));
  CHECK(error_upper_bound(adaptive, 1024, Algorithm::fixed_rows) ==
        doctest::Approx(16.0).epsilon(1e-12));
  CHECK(error_upper_bound(adaptive, 1024, Algorithm::zero) ==
        doctest::Approx(16.0).epsilon(1e-12));

  const SpacePair degenerate = make_space(256, 256, 2, 1, 2, 1);
  CHECK(error_upper_bound(degenerate, 1024, Algorithm::dispatch) ==
        embedding_norm(degenerate));
}
