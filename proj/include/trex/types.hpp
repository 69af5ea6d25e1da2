#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

namespace trex {

// Response plus column-standardized design. Immutable after construction;
// safe to share across worker threads.
struct Dataset {
  Eigen::VectorXd y;           // length n
  Eigen::MatrixXd x;           // n x p, each column has l2 norm sqrt(n)
  Eigen::VectorXd col_scales;  // divisor applied per column: raw_norm_j / sqrt(n)
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  std::vector<std::string> column_names;  // empty unless loaded from CSV

  // Column label for reporting: CSV header name when present, else "x<j+1>".
  std::string name_of(int j) const;
};

// Output of any sparse solver. `support` holds the exact nonzeros of
// `beta` in ascending order; solvers produce hard zeros, so there is no
// tolerance band.
struct SparseFit {
  Eigen::VectorXd beta;
  std::vector<int> support;
  double objective = std::numeric_limits<double>::quiet_NaN();
  // Smoothed TREX criterion at beta; NaN for non-TREX fits.
  double objective_smooth = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool converged = false;
  double runtime_secs = 0.0;
  // Objective value after each accepted iterate / sweep.
  std::vector<double> objective_trace;
};

// Exact nonzero positions of beta, ascending.
std::vector<int> support_of(const Eigen::VectorXd& beta);

}  // namespace trex
