// Command-line front end. Links against the shared C API only.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vva.h"

namespace {

double parse_exponent_value(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") {
    return INFINITY;
  }
  std::size_t pos = 0;
  double v = std::stod(text, &pos);
  if (pos != text.size()) {
    throw CLI::ValidationError("exponent", "cannot parse exponent: " + text);
  }
  return v;
}

std::vector<std::uint64_t> parse_budget_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? comma : comma - start);
    if (item.empty()) {
      throw CLI::ValidationError("budgets", "empty list entry");
    }
    out.push_back(std::strtoull(item.c_str(), nullptr, 10));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void die(const std::string& context) {
  std::fprintf(stderr, "error: %s: %s\n", context.c_str(), vva_last_error());
  std::exit(1);
}

struct MatrixHandle {
  vva_matrix* m = nullptr;
  ~MatrixHandle() { vva_matrix_free(m); }
};

struct ReportHandle {
  vva_report* r = nullptr;
  ~ReportHandle() { vva_report_free(r); }
};

void emit_report(const vva_report* report, const std::string& out_path,
                 const std::string& format) {
  if (!out_path.empty()) {
    if (vva_report_save(report, out_path.c_str(), format.c_str()) != VVA_OK) {
      die("writing report");
    }
    std::printf("wrote %zu records to %s\n", vva_report_size(report),
                out_path.c_str());
  } else {
    char* text = nullptr;
    if (vva_report_to_string(report, format.c_str(), &text) != VVA_OK) {
      die("formatting report");
    }
    std::fputs(text, stdout);
    vva_free_string(text);
  }
}

void print_fit(const vva_report* report) {
  double slope, intercept, r2;
  if (vva_report_fit(report, &slope, &intercept, &r2) == VVA_OK) {
    std::size_t used = 0, excluded = 0;
    vva_report_fit_cells(report, &used, &excluded);
    std::printf("fit: slope=%.6g intercept=%.6g r2=%.6g over %zu cells"
                " (%zu exact-zero cells excluded)\n",
                slope, intercept, r2, used, excluded);
  } else {
    std::printf("fit: not available (fewer than 3 positive cells)\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomized mixed-norm approximation toolkit"};
  app.require_subcommand(1);

  std::string in_path, out_path, out_matrix_path, format = "csv";
  std::string p_text = "1", q_text = "2", u_text = "2", v_text = "1";
  std::string algorithm = "dispatch", budgets_text;
  std::size_t n1 = 16, n2 = 16, row = 1;
  std::uint64_t budget = 1, seed = 0, eval_budget = 0;
  std::uint32_t trials = 100, m = 0, threads = 1;
  int measure = 1;
  double moment = 1.0;

  auto* norm = app.add_subcommand("norm", "mixed norm of a matrix file");
  norm->add_option("--in", in_path, "matrix file")->required();
  norm->add_option("--p", p_text, "outer exponent (number or inf)");
  norm->add_option("--u", u_text, "inner exponent (number or inf)");

  auto* estimate =
      app.add_subcommand("estimate", "sampled norm estimation study");
  estimate->add_option("--in", in_path, "matrix file")->required();
  estimate->add_option("--row", row, "target row, 1-based");
  estimate->add_option("--u", u_text, "space exponent for the rate label");
  estimate->add_option("--v", v_text, "estimated norm exponent (< inf)");
  estimate->add_option("--budgets", budgets_text, "sample counts a,b,c")
      ->required();
  estimate->add_option("--trials", trials, "trials per sample count");
  estimate->add_option("--seed", seed, "master seed (decimal 64-bit)");
  estimate->add_option("--out", out_path, "report file");
  estimate->add_option("--format", format, "csv or json");

  auto* approx = app.add_subcommand("approx", "single approximation run");
  approx->add_option("--in", in_path, "matrix file")->required();
  approx->add_option("--algorithm", algorithm,
                     "dispatch|a2|a3|zero|fixed_rows|random_cells");
  approx->add_option("--budget", budget, "information budget n")->required();
  approx->add_option("--m", m, "median repetitions (0 = default)");
  approx->add_option("--p", p_text, "input outer exponent");
  approx->add_option("--q", q_text, "output outer exponent");
  approx->add_option("--u", u_text, "input inner exponent");
  approx->add_option("--v", v_text, "output inner exponent");
  approx->add_option("--seed", seed, "master seed");
  approx->add_option("--out-matrix", out_matrix_path, "write the output here");

  auto* rates = app.add_subcommand("rates", "Monte Carlo error sweep + fit");
  rates->add_option("--n1", n1, "rows")->required();
  rates->add_option("--n2", n2, "columns")->required();
  rates->add_option("--p", p_text, "input outer exponent");
  rates->add_option("--q", q_text, "output outer exponent");
  rates->add_option("--u", u_text, "input inner exponent");
  rates->add_option("--v", v_text, "output inner exponent");
  rates->add_option("--budgets", budgets_text, "budget list a,b,c");
  rates->add_option("--budget", budget, "single budget (alternative)");
  rates->add_option("--m", m, "median repetitions (0 = default)");
  rates->add_option("--measure", measure, "instance family 1..6");
  rates->add_option("--algorithm", algorithm,
                    "dispatch|a2|a3|zero|fixed_rows|random_cells");
  rates->add_option("--trials", trials, "trials per budget");
  rates->add_option("--w", moment, "error moment w >= 1");
  rates->add_option("--seed", seed, "master seed");
  rates->add_option("--threads", threads, "trial-level parallelism");
  rates->add_option("--out", out_path, "report file");
  rates->add_option("--format", format, "csv or json");

  auto* gap = app.add_subcommand("gap", "adaptive vs non-adaptive comparison");
  gap->add_option("--budgets", budgets_text, "budget list a,b,c (each >= 64)");
  gap->add_option("--budget", budget, "single budget (alternative)");
  gap->add_option("--trials", trials, "trials per budget");
  gap->add_option("--seed", seed, "master seed");
  gap->add_option("--threads", threads, "trial-level parallelism");
  gap->add_option("--out", out_path, "report file");
  gap->add_option("--format", format, "csv or json");

  auto* lower = app.add_subcommand("lower-bound",
                                   "average-case lower bound (families 1-4)");
  lower->add_option("--measure", measure, "instance family 1..4")->required();
  lower->add_option("--n1", n1, "rows")->required();
  lower->add_option("--n2", n2, "columns")->required();
  lower->add_option("--p", p_text, "input outer exponent");
  lower->add_option("--q", q_text, "output outer exponent");
  lower->add_option("--u", u_text, "input inner exponent");
  lower->add_option("--v", v_text, "output inner exponent");
  lower->add_option("--budget", budget, "tuning budget n")->required();
  lower->add_option("--eval-budget", eval_budget,
                    "cardinality the bound is evaluated at (default: n)");

  auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
  selftest->add_option("--seed", seed, "master seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (norm->parsed()) {
      MatrixHandle f;
      if (vva_matrix_load(in_path.c_str(), &f.m) != VVA_OK) die("loading matrix");
      double value = 0.0;
      if (vva_mixed_norm(f.m, parse_exponent_value(p_text),
                         parse_exponent_value(u_text), &value) != VVA_OK) {
        die("computing norm");
      }
      std::printf("%.17g\n", value);
      return 0;
    }

    if (estimate->parsed()) {
      MatrixHandle f;
      if (vva_matrix_load(in_path.c_str(), &f.m) != VVA_OK) die("loading matrix");
      if (row < 1 || row > vva_matrix_rows(f.m)) {
        std::fprintf(stderr, "error: row out of range\n");
        return 1;
      }
      const std::vector<std::uint64_t> counts = parse_budget_list(budgets_text);
      ReportHandle report;
      if (vva_run_estimate_study(f.m, row - 1, parse_exponent_value(u_text),
                                 parse_exponent_value(v_text), counts.data(),
                                 counts.size(), trials, seed,
                                 &report.r) != VVA_OK) {
        die("estimate study");
      }
      emit_report(report.r, out_path, format);
      print_fit(report.r);
      return 0;
    }

    if (approx->parsed()) {
      MatrixHandle f, result;
      if (vva_matrix_load(in_path.c_str(), &f.m) != VVA_OK) die("loading matrix");
      std::uint64_t queries = 0;
      double error = 0.0;
      if (vva_approximate(f.m, algorithm.c_str(), parse_exponent_value(p_text),
                          parse_exponent_value(q_text),
                          parse_exponent_value(u_text),
                          parse_exponent_value(v_text), budget, m, seed,
                          &result.m, &queries, &error) != VVA_OK) {
        die("approximation run");
      }
      std::printf("algorithm=%s budget=%" PRIu64 " queries=%" PRIu64
                  " error=%.17g\n",
                  algorithm.c_str(), budget, queries, error);
      if (!out_matrix_path.empty()) {
        if (vva_matrix_save(result.m, out_matrix_path.c_str()) != VVA_OK) {
          die("writing output matrix");
        }
      }
      return 0;
    }

    if (rates->parsed()) {
      std::vector<std::uint64_t> budgets = budgets_text.empty()
                                               ? std::vector<std::uint64_t>{budget}
                                               : parse_budget_list(budgets_text);
      vva_rates_config cfg{};
      cfg.rows = n1;
      cfg.cols = n2;
      cfg.p = parse_exponent_value(p_text);
      cfg.q = parse_exponent_value(q_text);
      cfg.u = parse_exponent_value(u_text);
      cfg.v = parse_exponent_value(v_text);
      cfg.budgets = budgets.data();
      cfg.num_budgets = budgets.size();
      cfg.measure = measure;
      cfg.algorithm = algorithm.c_str();
      cfg.trials = trials;
      cfg.moment = moment;
      cfg.m = m;
      cfg.seed = seed;
      cfg.threads = threads;
      ReportHandle report;
      if (vva_run_rates(&cfg, &report.r) != VVA_OK) die("rates experiment");
      emit_report(report.r, out_path, format);
      print_fit(report.r);
      return 0;
    }

    if (gap->parsed()) {
      std::vector<std::uint64_t> budgets = budgets_text.empty()
                                               ? std::vector<std::uint64_t>{budget}
                                               : parse_budget_list(budgets_text);
      ReportHandle report;
      if (vva_run_gap(budgets.data(), budgets.size(), trials, seed, threads,
                      &report.r) != VVA_OK) {
        die("gap experiment");
      }
      emit_report(report.r, out_path, format);
      const std::size_t points = vva_report_gap_points(report.r);
      for (std::size_t i = 0; i < points; ++i) {
        std::uint64_t n = 0;
        double ratio = 0.0, se = 0.0;
        vva_report_gap_point(report.r, i, &n, &ratio, &se);
        std::printf("gap: n=%" PRIu64
                    " nonadaptive/adaptive ratio=%.6g (se %.3g)\n",
                    n, ratio, se);
      }
      return 0;
    }

    if (lower->parsed()) {
      int applicable = 0;
      double value = 0.0;
      if (vva_lower_bound(measure, n1, n2, parse_exponent_value(p_text),
                          parse_exponent_value(q_text),
                          parse_exponent_value(u_text),
                          parse_exponent_value(v_text), budget,
                          eval_budget ? eval_budget : budget, &applicable,
                          &value) != VVA_OK) {
        die("lower bound");
      }
      if (applicable) {
        std::printf("%.17g\n", value);
      } else {
        std::printf("inapplicable\n");
      }
      return 0;
    }

    if (selftest->parsed()) {
      const int failures = vva_selftest(seed, 1);
      if (failures < 0) die("selftest");
      if (failures > 0) {
        std::printf("selftest: %d check(s) FAILED\n", failures);
        return 2;
      }
      std::printf("selftest: all checks passed\n");
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
