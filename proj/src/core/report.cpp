#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "matrix_io.hpp"

namespace vva {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw std::invalid_argument("unknown report format: " + name);
}

std::string format_exponent(Exponent e) {
  if (e.is_infinite()) return "inf";
  return format_double(e.value());
}

Exponent parse_exponent(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") {
    return Exponent::infinity();
  }
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse exponent: " + text);
  }
  if (pos != text.size()) {
    throw std::invalid_argument("cannot parse exponent: " + text);
  }
  return Exponent::from_value(v);
}

static const char* kCsvHeader =
    "experiment,n,N1,N2,p,q,u,v,m,trials,mean_error,std_error,"
    "w_moment_error,query_count,bound_value,seed";

std::string report_to_string(const Report& report, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const ReportRecord& r : report.records) {
      out += r.experiment;
      out += ',' + std::to_string(r.n);
      out += ',' + std::to_string(r.n1);
      out += ',' + std::to_string(r.n2);
      out += ',' + format_exponent(r.p);
      out += ',' + format_exponent(r.q);
      out += ',' + format_exponent(r.u);
      out += ',' + format_exponent(r.v);
      out += ',' + std::to_string(r.m);
      out += ',' + std::to_string(r.trials);
      out += ',' + format_double(r.mean_error);
      out += ',' + format_double(r.std_error);
      out += ',' + format_double(r.w_moment_error);
      out += ',' + std::to_string(r.query_count);
      out += ',' + format_double(r.bound_value);
      out += ',' + std::to_string(r.seed);
      out += '\n';
    }
    return out;
  }

  nlohmann::json arr = nlohmann::json::array();
  for (const ReportRecord& r : report.records) {
    nlohmann::json obj;
    obj["experiment"] = r.experiment;
    obj["n"] = r.n;
    obj["N1"] = r.n1;
    obj["N2"] = r.n2;
    obj["p"] = format_exponent(r.p);
    obj["q"] = format_exponent(r.q);
    obj["u"] = format_exponent(r.u);
    obj["v"] = format_exponent(r.v);
    obj["m"] = r.m;
    obj["trials"] = r.trials;
    obj["mean_error"] = r.mean_error;
    obj["std_error"] = r.std_error;
    obj["w_moment_error"] = r.w_moment_error;
    obj["query_count"] = r.query_count;
    obj["bound_value"] = r.bound_value;
    obj["seed"] = r.seed;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void write_report_file(const Report& report, const std::string& path,
                       ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << report_to_string(report, format);
  if (!out) throw IoError("write failed: " + path);
}

Report parse_report_json(const std::string& text) {
  nlohmann::json arr = nlohmann::json::parse(text);
  if (!arr.is_array()) {
    throw std::invalid_argument("report JSON must be an array of records");
  }
  Report report;
  for (const auto& obj : arr) {
    ReportRecord r;
    r.experiment = obj.at("experiment").get<std::string>();
    r.n = obj.at("n").get<std::uint64_t>();
    r.n1 = obj.at("N1").get<std::size_t>();
    r.n2 = obj.at("N2").get<std::size_t>();
    r.p = parse_exponent(obj.at("p").get<std::string>());
    r.q = parse_exponent(obj.at("q").get<std::string>());
    r.u = parse_exponent(obj.at("u").get<std::string>());
    r.v = parse_exponent(obj.at("v").get<std::string>());
    r.m = obj.at("m").get<std::uint32_t>();
    r.trials = obj.at("trials").get<std::uint32_t>();
    r.mean_error = obj.at("mean_error").get<double>();
    r.std_error = obj.at("std_error").get<double>();
    r.w_moment_error = obj.at("w_moment_error").get<double>();
    r.query_count = obj.at("query_count").get<std::uint64_t>();
    r.bound_value = obj.at("bound_value").get<double>();
    r.seed = obj.at("seed").get<std::uint64_t>();
    report.records.push_back(std::move(r));
  }
  return report;
}

}  // namespace vva
