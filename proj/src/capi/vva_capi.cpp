#include "vva.h"

#include <cmath>
#include <cstring>
#include <iostream>
#include <new>
#include <string>

#include "algorithms.hpp"
#include "experiments.hpp"
#include "hard_instances.hpp"
#include "matrix_io.hpp"
#include "mixed_norm.hpp"
#include "report.hpp"
#include "selftest.hpp"

struct vva_matrix {
  vva::Matrix value;
};

struct vva_report {
  vva::Report value;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

int translate_current_exception() {
  try {
    throw;
  } catch (const vva::BudgetError& e) {
    return fail(VVA_ERR_BUDGET, e.what());
  } catch (const vva::IoError& e) {
    return fail(VVA_ERR_IO, e.what());
  } catch (const std::out_of_range& e) {
    return fail(VVA_ERR_INDEX, e.what());
  } catch (const std::length_error& e) {
    return fail(VVA_ERR_SIZE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(VVA_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VVA_ERR_STATE, "out of memory");
  } catch (const std::exception& e) {
    return fail(VVA_ERR_STATE, e.what());
  } catch (...) {
    return fail(VVA_ERR_STATE, "unknown error");
  }
}

vva::Exponent exponent_from(double value) {
  return vva::Exponent::from_value(value);
}

vva::SpacePair make_space(size_t rows, size_t cols, double p, double q,
                          double u, double v) {
  vva::SpacePair sp;
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("dimensions must be positive");
  }
  sp.n1 = rows;
  sp.n2 = cols;
  sp.p = exponent_from(p);
  sp.q = exponent_from(q);
  sp.u = exponent_from(u);
  sp.v = exponent_from(v);
  return sp;
}

vva::MeasureFamily family_from(int family) {
  if (family < 1 || family > 6) {
    throw std::invalid_argument("measure family must be in 1..6");
  }
  return static_cast<vva::MeasureFamily>(family);
}

int require(const void* ptr, const char* what) {
  if (!ptr) return fail(VVA_ERR_ARGUMENT, std::string(what) + " is null");
  return VVA_OK;
}

}  // namespace

extern "C" {

const char* vva_version(void) { return "1.0.0"; }

const char* vva_last_error(void) { return g_last_error.c_str(); }

int vva_matrix_create(size_t rows, size_t cols, const double* data,
                      vva_matrix** out) {
  if (int rc = require(out, "out")) return rc;
  try {
    vva::Matrix value(rows, cols);
    if (data) {
      for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) {
          const double x = data[i * cols + j];
          if (!std::isfinite(x)) {
            throw std::invalid_argument("matrix entries must be finite");
          }
          value(i, j) = x;
        }
      }
    }
    *out = new vva_matrix{std::move(value)};
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vva_matrix_load(const char* path, vva_matrix** out) {
  if (int rc = require(path, "path")) return rc;
  if (int rc = require(out, "out")) return rc;
  try {
    *out = new vva_matrix{vva::read_matrix_file(path)};
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vva_matrix_save(const vva_matrix* m, const char* path) {
  if (int rc = require(m, "matrix")) return rc;
  if (int rc = require(path, "path")) return rc;
  try {
    vva::write_matrix_file(path, m->value);
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

size_t vva_matrix_rows(const vva_matrix* m) { return m ? m->value.rows() : 0; }

size_t vva_matrix_cols(const vva_matrix* m) { return m ? m->value.cols() : 0; }

int vva_matrix_get(const vva_matrix* m, size_t i, size_t j, double* out) {
  if (int rc = require(m, "matrix")) return rc;
  if (int rc = require(out, "out")) return rc;
  try {
    *out = m->value.at(i, j);
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

void vva_matrix_free(vva_matrix* m) { delete m; }

int vva_mixed_norm(const vva_matrix* m, double p, double u, double* out) {
  if (int rc = require(m, "matrix")) return rc;
  if (int rc = require(out, "out")) return rc;
  try {
    *out = vva::mixed_norm(m->value, exponent_from(p), exponent_from(u));
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vva_embedding_norm(size_t rows, size_t cols, double p, double q, double u,
                       double v, double* out) {
  if (int rc = require(out, "out")) return rc;
  try {
    *out = vva::embedding_norm(make_space(rows, cols, p, q, u, v));
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vva_default_repetitions(size_t rows, size_t cols, uint32_t* out) {
  if (int rc = require(out, "out")) return rc;
  try {
    if (rows == 0 || cols == 0) {
      throw std::invalid_argument("dimensions must be positive");
    }
    *out = vva::default_repetitions(rows, cols);
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vva_query_cost(size_t rows, size_t cols, uint64_t n, uint32_t m,
                   int iterated, uint64_t* exact, uint64_t* bound) {
  try {
    vva::ApproxParams params;
    params.sp = make_space(rows, cols, 1, 2, 2, 1);
    params.n = n;
    params.m = m;
    const vva::QueryCost cost = vva::query_cost(params, iterated != 0);
    if (exact) *exact = cost.exact;
    if (bound) *bound = cost.bound;
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vva_approximate(const vva_matrix* f, const char* algorithm, double p,
                    double q, double u, double v, uint64_t budget, uint32_t m,
                    uint64_t seed, vva_matrix** out_approx,
                    uint64_t* out_queries, double* out_error) {
  if (int rc = require(f, "matrix")) return rc;
  if (int rc = require(algorithm, "algorithm")) return rc;
  try {
    const vva::Algorithm algo = vva::parse_algorithm(algorithm);
    vva::ApproxParams params;
    params.sp = make_space(f->value.rows(), f->value.cols(), p, q, u, v);
    params.n = budget;
    params.m = m ? m : vva::default_repetitions(params.sp.n1, params.sp.n2);

    vva::InfoOracle oracle(f->value);
    vva::RandomStream stream(seed, "approx", 0);
    vva::Matrix result = [&] {
      switch (algo) {
        case vva::Algorithm::dispatch:
          return vva::approx_dispatch(oracle, params, stream);
        case vva::Algorithm::a2:
          return vva::approx_a2(oracle, params, stream);
        case vva::Algorithm::a3:
          return vva::approx_a3(oracle, params, stream);
        case vva::Algorithm::zero:
          return vva::zero_approximation(params.sp);
        case vva::Algorithm::fixed_rows:
          return vva::approx_fixed_rows(oracle, params.sp, params.n);
        case vva::Algorithm::random_cells:
          return vva::approx_random_cells(oracle, params.sp, params.n, stream);
      }
      throw std::invalid_argument("unknown algorithm");
    }();

    if (out_queries) *out_queries = oracle.count();
    if (out_error) {
      *out_error =
          vva::mixed_norm(f->value - result, params.sp.q, params.sp.v);
    }
    if (out_approx) *out_approx = new vva_matrix{std::move(result)};
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vva_sample_instance(int family, size_t rows, size_t cols, double p,
                        double u, uint64_t n, uint64_t seed,
                        uint64_t draw_index, vva_matrix** out) {
  if (int rc = require(out, "out")) return rc;
  try {
    const vva::SpacePair sp = make_space(rows, cols, p, 2, u, 1);
    const vva::HardInstanceSpec spec =
        vva::make_hard_instance_spec(family_from(family), sp, n);
    vva::RandomStream stream(seed, "instance", draw_index);
    *out = new vva_matrix{vva::sample_instance(spec, stream)};
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vva_lower_bound(int family, size_t rows, size_t cols, double p, double q,
                    double u, double v, uint64_t n, uint64_t eval_budget,
                    int* applicable, double* value) {
  if (int rc = require(applicable, "applicable")) return rc;
  if (int rc = require(value, "value")) return rc;
  try {
    const vva::SpacePair sp = make_space(rows, cols, p, q, u, v);
    const vva::HardInstanceSpec spec =
        vva::make_hard_instance_spec(family_from(family), sp, n);
    const std::optional<double> bound =
        vva::average_case_lower_bound(spec, eval_budget);
    *applicable = bound.has_value() ? 1 : 0;
    if (bound) *value = *bound;
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vva_run_rates(const vva_rates_config* cfg, vva_report** out) {
  if (int rc = require(cfg, "config")) return rc;
  if (int rc = require(out, "out")) return rc;
  try {
    if (!cfg->budgets || cfg->num_budgets == 0) {
      throw std::invalid_argument("budgets must be non-empty");
    }
    if (!cfg->algorithm) throw std::invalid_argument("algorithm is null");
    vva::ExperimentConfig config;
    config.sp =
        make_space(cfg->rows, cfg->cols, cfg->p, cfg->q, cfg->u, cfg->v);
    config.budgets.assign(cfg->budgets, cfg->budgets + cfg->num_budgets);
    config.m_override = cfg->m;
    config.measure = family_from(cfg->measure);
    config.algorithm = vva::parse_algorithm(cfg->algorithm);
    config.trials = cfg->trials;
    config.moment = cfg->moment;
    config.master_seed = cfg->seed;
    config.threads = cfg->threads;
    *out = new vva_report{vva::mc_error(config)};
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vva_run_gap(const uint64_t* budgets, size_t num_budgets, uint32_t trials,
                uint64_t seed, uint32_t threads, vva_report** out) {
  if (int rc = require(budgets, "budgets")) return rc;
  if (int rc = require(out, "out")) return rc;
  try {
    vva::GapConfig config;
    config.budgets.assign(budgets, budgets + num_budgets);
    config.trials = trials;
    config.master_seed = seed;
    config.threads = threads;
    *out = new vva_report{vva::gap_experiment(config)};
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vva_run_estimate_study(const vva_matrix* f, size_t row, double u, double v,
                           const uint64_t* sample_counts, size_t num_counts,
                           uint32_t trials, uint64_t seed, vva_report** out) {
  if (int rc = require(f, "matrix")) return rc;
  if (int rc = require(sample_counts, "sample_counts")) return rc;
  if (int rc = require(out, "out")) return rc;
  try {
    if (row >= f->value.rows()) {
      throw std::out_of_range("row index out of range");
    }
    vva::EstimateStudyConfig config;
    const auto row_view = f->value.row(row);
    config.row.assign(row_view.begin(), row_view.end());
    config.u = exponent_from(u);
    config.v = exponent_from(v);
    config.sample_counts.assign(sample_counts, sample_counts + num_counts);
    config.trials = trials;
    config.master_seed = seed;
    *out = new vva_report{vva::estimate_study(config)};
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

size_t vva_report_size(const vva_report* r) {
  return r ? r->value.records.size() : 0;
}

int vva_report_to_string(const vva_report* r, const char* format, char** out) {
  if (int rc = require(r, "report")) return rc;
  if (int rc = require(format, "format")) return rc;
  if (int rc = require(out, "out")) return rc;
  try {
    const std::string text =
        vva::report_to_string(r->value, vva::parse_report_format(format));
    char* buffer = new char[text.size() + 1];
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    *out = buffer;
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vva_report_save(const vva_report* r, const char* path, const char* format) {
  if (int rc = require(r, "report")) return rc;
  if (int rc = require(path, "path")) return rc;
  if (int rc = require(format, "format")) return rc;
  try {
    vva::write_report_file(r->value, path, vva::parse_report_format(format));
    return VVA_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vva_report_fit(const vva_report* r, double* slope, double* intercept,
                   double* r2) {
  if (int rc = require(r, "report")) return rc;
  if (!r->value.fit) return fail(VVA_ERR_STATE, "no rate fit available");
  if (slope) *slope = r->value.fit->slope;
  if (intercept) *intercept = r->value.fit->intercept;
  if (r2) *r2 = r->value.fit->r2;
  return VVA_OK;
}

int vva_report_fit_cells(const vva_report* r, size_t* used, size_t* excluded) {
  if (int rc = require(r, "report")) return rc;
  if (used) *used = r->value.fit ? r->value.fit->points_used : 0;
  if (excluded) *excluded = r->value.fit_zero_cells_excluded;
  return VVA_OK;
}

size_t vva_report_gap_points(const vva_report* r) {
  return r ? r->value.gap_points.size() : 0;
}

int vva_report_gap_point(const vva_report* r, size_t index, uint64_t* n,
                         double* ratio, double* ratio_std_error) {
  if (int rc = require(r, "report")) return rc;
  if (index >= r->value.gap_points.size()) {
    return fail(VVA_ERR_INDEX, "gap point index out of range");
  }
  const vva::GapPoint& point = r->value.gap_points[index];
  if (n) *n = point.n;
  if (ratio) *ratio = point.ratio;
  if (ratio_std_error) *ratio_std_error = point.ratio_std_error;
  return VVA_OK;
}

void vva_report_free(vva_report* r) { delete r; }

void vva_free_string(char* s) { delete[] s; }

int vva_selftest(uint64_t seed, int verbose) {
  try {
    return vva::selftest(seed, verbose != 0, std::cout);
  } catch (...) {
    return translate_current_exception();
  }
}

}  // extern "C"
