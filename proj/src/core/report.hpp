#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exponent.hpp"
#include "rate_fit.hpp"

namespace vva {

// One aggregated experiment cell.
struct ReportRecord {
  std::string experiment;
  std::uint64_t n = 0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  Exponent p, q, u, v;
  std::uint32_t m = 0;
  std::uint32_t trials = 0;
  double mean_error = 0.0;
  double std_error = 0.0;     // standard error of the mean
  double w_moment_error = 0.0;
  std::uint64_t query_count = 0;
  double bound_value = 0.0;
  std::uint64_t seed = 0;
};

// Ratio of the best non-adaptive error to the adaptive error at one
// budget of the gap experiment.
struct GapPoint {
  std::uint64_t n = 0;
  double ratio = 0.0;
  double ratio_std_error = 0.0;
};

struct Report {
  std::vector<ReportRecord> records;
  std::optional<RateFit> fit;
  std::size_t fit_zero_cells_excluded = 0;
  std::vector<GapPoint> gap_points;
};

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(const std::string& name);

std::string format_exponent(Exponent e);
Exponent parse_exponent(const std::string& text);

// CSV has the fixed header
// experiment,n,N1,N2,p,q,u,v,m,trials,mean_error,std_error,
// w_moment_error,query_count,bound_value,seed;
// JSON is an array of objects with the same keys.
std::string report_to_string(const Report& report, ReportFormat format);
void write_report_file(const Report& report, const std::string& path,
                       ReportFormat format);

// Parses records emitted by report_to_string (JSON only).
Report parse_report_json(const std::string& text);

}  // namespace vva
