#include "trex/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "trex/core.hpp"
#include "trex/errors.hpp"
#include "trex/version.hpp"

namespace trex {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_number(const std::string& field, double* out) {
  if (field.empty()) return false;
  char* end = nullptr;
  *out = std::strtod(field.c_str(), &end);
  return end == field.c_str() + field.size();
}

}  // namespace

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    rows.push_back(std::move(fields));
  }
  return rows;
}

namespace {

// Parses a rectangular numeric block; a non-numeric first row is taken
// as the header. Row/column indices in errors are 1-based file positions.
struct NumericTable {
  std::vector<std::string> header;  // empty if none
  Eigen::MatrixXd values;
};

NumericTable parse_numeric_csv(const std::string& path) {
  auto rows = read_csv_rows(path);
  if (rows.empty()) throw ParseError(1, 1, "'" + path + "' is empty");

  NumericTable table;
  size_t data_start = 0;
  double probe;
  bool first_numeric = true;
  for (const auto& field : rows[0]) {
    if (!parse_number(field, &probe)) {
      first_numeric = false;
      break;
    }
  }
  if (!first_numeric) {
    table.header = rows[0];
    data_start = 1;
    if (rows.size() == 1) throw ParseError(2, 1, "'" + path + "' has no data rows");
  }

  size_t n = rows.size() - data_start;
  size_t p = rows[data_start].size();
  table.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (size_t i = 0; i < n; ++i) {
    const auto& row = rows[data_start + i];
    if (row.size() != p) {
      throw ParseError(static_cast<int>(data_start + i + 1), 1,
                       "'" + path + "' row has " + std::to_string(row.size()) +
                           " fields, expected " + std::to_string(p));
    }
    for (size_t j = 0; j < p; ++j) {
      double v;
      if (!parse_number(row[j], &v)) {
        throw ParseError(static_cast<int>(data_start + i + 1),
                         static_cast<int>(j + 1),
                         "'" + path + "': cannot parse '" + row[j] + "'");
      }
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return table;
}

}  // namespace

Dataset load_csv_dataset(const std::string& design_path,
                         const std::string& response_path) {
  NumericTable design = parse_numeric_csv(design_path);
  NumericTable response = parse_numeric_csv(response_path);
  if (response.values.cols() != 1) {
    throw ParseError(1, 2, "'" + response_path + "' must have a single column");
  }
  if (response.values.rows() != design.values.rows()) {
    throw DimensionMismatch(
        "response has " + std::to_string(response.values.rows()) +
        " rows but design has " + std::to_string(design.values.rows()));
  }
  Dataset d = standardize(design.values, response.values.col(0));
  d.column_names = design.header;
  return d;
}

void save_csv_dataset(const Dataset& d, const std::string& design_path,
                      const std::string& response_path) {
  std::ofstream xd(design_path);
  if (!xd) throw IoError("cannot write '" + design_path + "'");
  for (Eigen::Index j = 0; j < d.p; ++j) {
    xd << (j ? "," : "") << d.name_of(static_cast<int>(j));
  }
  xd << "\n";
  for (Eigen::Index i = 0; i < d.n; ++i) {
    for (Eigen::Index j = 0; j < d.p; ++j) {
      if (j) xd << ",";
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", d.x(i, j));
      xd << buf;
    }
    xd << "\n";
  }
  std::ofstream yd(response_path);
  if (!yd) throw IoError("cannot write '" + response_path + "'");
  yd << "y\n";
  for (Eigen::Index i = 0; i < d.n; ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", d.y[i]);
    yd << buf << "\n";
  }
}

OutputFormat format_from_name(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + name + "'");
}

void write_records_csv(const std::vector<ExperimentRecord>& records,
                       std::ostream& out) {
  out << "method,n,p,sigma,kappa,repetition,hamming,support_size,"
         "runtime_secs,converged\n";
  for (const auto& r : records) {
    out << method_name(r.method) << ',' << r.config.n << ',' << r.config.p
        << ',' << format_double(r.config.sigma) << ','
        << format_double(r.config.kappa) << ',' << r.repetition << ','
        << r.hamming << ',' << r.support_size << ','
        << format_double(r.runtime_secs) << ',' << (r.converged ? 1 : 0)
        << '\n';
  }
}

namespace {

nlohmann::json record_to_json(const ExperimentRecord& r) {
  return nlohmann::json{{"method", method_name(r.method)},
                        {"n", r.config.n},
                        {"p", r.config.p},
                        {"sigma", r.config.sigma},
                        {"kappa", r.config.kappa},
                        {"repetition", r.repetition},
                        {"hamming", r.hamming},
                        {"support_size", r.support_size},
                        {"runtime_secs", r.runtime_secs},
                        {"converged", r.converged}};
}

nlohmann::json with_tool_info(nlohmann::json metadata) {
  metadata["tool"] = "trex";
  metadata["version"] = TREX_VERSION;
  return metadata;
}

}  // namespace

void emit_records(const std::vector<ExperimentRecord>& records,
                  OutputFormat format, const std::string& path,
                  const nlohmann::json& metadata) {
  if (records.empty()) throw Error("no records to emit");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  if (format == OutputFormat::Csv) {
    write_records_csv(records, out);
  } else {
    nlohmann::json doc;
    doc["metadata"] = with_tool_info(metadata);
    doc["records"] = nlohmann::json::array();
    for (const auto& r : records) doc["records"].push_back(record_to_json(r));
    out << doc.dump(2) << "\n";
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<ExperimentRecord> parse_records_csv(const std::string& path) {
  auto rows = read_csv_rows(path);
  if (rows.empty()) throw ParseError(1, 1, "'" + path + "' is empty");
  std::vector<ExperimentRecord> records;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 10) {
      throw ParseError(static_cast<int>(i + 1), 1, "expected 10 fields");
    }
    auto num = [&](size_t col) {
      double v;
      if (!parse_number(row[col], &v)) {
        throw ParseError(static_cast<int>(i + 1), static_cast<int>(col + 1),
                         "'" + path + "': cannot parse '" + row[col] + "'");
      }
      return v;
    };
    ExperimentRecord r;
    r.method = method_from_name(row[0]);
    r.config.n = static_cast<int>(num(1));
    r.config.p = static_cast<int>(num(2));
    r.config.sigma = num(3);
    r.config.kappa = num(4);
    r.repetition = static_cast<int>(num(5));
    r.hamming = static_cast<int>(num(6));
    r.support_size = static_cast<int>(num(7));
    r.runtime_secs = num(8);
    r.converged = row[9] == "1";
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<CellSummary> summarize_records(
    const std::vector<ExperimentRecord>& records) {
  // Key: (method, n, p, sigma, kappa) in stable iteration order.
  std::map<std::tuple<std::string, int, int, double, double>,
           std::vector<const ExperimentRecord*>>
      cells;
  for (const auto& r : records) {
    cells[{method_name(r.method), r.config.n, r.config.p, r.config.sigma,
           r.config.kappa}]
        .push_back(&r);
  }

  auto mean_sd = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var = v.size() > 1 ? var / static_cast<double>(v.size() - 1) : 0.0;
    return std::pair<double, double>(mean, std::sqrt(var));
  };
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  };

  std::vector<CellSummary> out;
  for (const auto& [key, recs] : cells) {
    CellSummary c;
    c.method = std::get<0>(key);
    c.n = std::get<1>(key);
    c.p = std::get<2>(key);
    c.sigma = std::get<3>(key);
    c.kappa = std::get<4>(key);
    c.reps = static_cast<int>(recs.size());
    std::vector<double> hamming, support, runtime;
    for (const auto* r : recs) {
      hamming.push_back(r->hamming);
      support.push_back(r->support_size);
      runtime.push_back(r->runtime_secs);
    }
    std::tie(c.hamming_mean, c.hamming_sd) = mean_sd(hamming);
    c.hamming_median = median(hamming);
    std::tie(c.support_mean, c.support_sd) = mean_sd(support);
    std::tie(c.runtime_mean, c.runtime_sd) = mean_sd(runtime);
    out.push_back(std::move(c));
  }
  return out;
}

void emit_summary(const std::vector<CellSummary>& cells,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "method,n,p,sigma,kappa,reps,hamming_mean,hamming_sd,hamming_median,"
         "support_mean,support_sd,runtime_mean,runtime_sd\n";
  for (const auto& c : cells) {
    out << c.method << ',' << c.n << ',' << c.p << ','
        << format_double(c.sigma) << ',' << format_double(c.kappa) << ','
        << c.reps << ',' << format_double(c.hamming_mean) << ','
        << format_double(c.hamming_sd) << ',' << format_double(c.hamming_median)
        << ',' << format_double(c.support_mean) << ','
        << format_double(c.support_sd) << ',' << format_double(c.runtime_mean)
        << ',' << format_double(c.runtime_sd) << '\n';
  }
}

void emit_bench(const BenchResult& bench, OutputFormat format,
                const std::string& path, const nlohmann::json& metadata) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  if (format == OutputFormat::Csv) {
    out << "method,n,p,repetition,runtime_secs\n";
    for (const auto& r : bench.records) {
      out << r.method << ',' << r.n << ',' << r.p << ',' << r.repetition << ','
          << format_double(r.runtime_secs) << '\n';
    }
  } else {
    nlohmann::json doc;
    doc["metadata"] = with_tool_info(metadata);
    doc["records"] = nlohmann::json::array();
    for (const auto& r : bench.records) {
      doc["records"].push_back({{"method", r.method},
                                {"n", r.n},
                                {"p", r.p},
                                {"repetition", r.repetition},
                                {"runtime_secs", r.runtime_secs}});
    }
    doc["summaries"] = nlohmann::json::array();
    for (const auto& s : bench.summaries) {
      nlohmann::json js{{"method", s.method},
                        {"p_grid", s.p_grid},
                        {"median_runtime", s.median_runtime}};
      if (s.has_exponent) js["exponent"] = s.exponent;
      doc["summaries"].push_back(js);
    }
    out << doc.dump(2) << "\n";
  }
}

}  // namespace trex
