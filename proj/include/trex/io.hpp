#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "trex/simbench.hpp"
#include "trex/types.hpp"

namespace trex {

// Real values in output files carry 10 significant digits.
std::string format_double(double x);

// Low-level comma tokenizer shared by every CSV reader in the tool.
// Whitespace around fields is trimmed; empty lines are skipped.
std::vector<std::vector<std::string>> read_csv_rows(const std::string& path);

// Loads a numeric design/response pair. A non-numeric first row is
// treated as a header and its names are carried into the Dataset. The
// result is standardized (columns scaled to norm sqrt(n)).
Dataset load_csv_dataset(const std::string& design_path,
                         const std::string& response_path);

// Writes a design/response pair loadable by load_csv_dataset; the design
// file gets an x1..xp header (or the dataset's column names).
void save_csv_dataset(const Dataset& d, const std::string& design_path,
                      const std::string& response_path);

enum class OutputFormat { Csv, Json };
OutputFormat format_from_name(const std::string& name);

// Experiment records: CSV has a fixed header
//   method,n,p,sigma,kappa,repetition,hamming,support_size,runtime_secs,converged
// JSON wraps the same rows in {"metadata": ..., "records": [...]}.
void emit_records(const std::vector<ExperimentRecord>& records,
                  OutputFormat format, const std::string& path,
                  const nlohmann::json& metadata);
void write_records_csv(const std::vector<ExperimentRecord>& records,
                       std::ostream& out);
std::vector<ExperimentRecord> parse_records_csv(const std::string& path);

// Per-cell summary rows (one per method x config cell) shaped for the
// noise-level panels of the synthetic study.
struct CellSummary {
  std::string method;
  int n = 0;
  int p = 0;
  double sigma = 0.0;
  double kappa = 0.0;
  int reps = 0;
  double hamming_mean = 0.0;
  double hamming_sd = 0.0;
  double hamming_median = 0.0;
  double support_mean = 0.0;
  double support_sd = 0.0;
  double runtime_mean = 0.0;
  double runtime_sd = 0.0;
};

std::vector<CellSummary> summarize_records(
    const std::vector<ExperimentRecord>& records);
void emit_summary(const std::vector<CellSummary>& cells,
                  const std::string& path);

// Runtime-scaling output: method,n,p,repetition,runtime_secs rows plus
// fitted exponents in the JSON metadata / printed summary.
void emit_bench(const BenchResult& bench, OutputFormat format,
                const std::string& path, const nlohmann::json& metadata);

}  // namespace trex
