#pragma once

#include <vector>

#include "trex/types.hpp"

namespace trex {

// Scales every column of `x` to l2 norm sqrt(n) in place and returns the
// applied divisors (raw_norm_j / sqrt(n)). Throws DegenerateColumn if a
// column norm falls below 1e-12 * sqrt(n).
Eigen::VectorXd standardize_columns(Eigen::MatrixXd& x);

// Builds a Dataset from raw inputs: validates finiteness and dimensions,
// scales each column to norm sqrt(n). Y is left untouched (no intercept
// is fitted anywhere in this library; pre-center upstream if needed).
Dataset standardize(const Eigen::MatrixXd& raw_x, const Eigen::VectorXd& raw_y);

// Row subset of a dataset (rows may repeat, e.g. bootstrap multisets).
// With restandardize, columns of the subset are rescaled to norm sqrt(m)
// where m = indices.size(); otherwise columns are taken verbatim and the
// sqrt(n)-norm invariant is intentionally not re-established (CV folds).
Dataset subset_rows(const Dataset& d, const std::vector<int>& indices,
                    bool restandardize);

// Y - X beta.
Eigen::VectorXd residual(const Dataset& d, const Eigen::VectorXd& beta);

// ||X^T r||_inf, the largest absolute column-residual correlation.
double sup_correlation(const Dataset& d, const Eigen::VectorXd& r);

// sign(z) * max(|z| - t, 0). Returns exact zeros.
double soft_threshold(double z, double t);

// Ordinary least squares restricted to `support`; off-support entries are
// exact zeros. Throws SingularSubmatrix when the restricted Gram matrix
// has condition number above 1e12 (or |support| > n).
Eigen::VectorXd least_squares_refit(const Dataset& d,
                                    const std::vector<int>& support);

// Maps standardized-scale coefficients back to the raw column scale.
Eigen::VectorXd to_raw_scale(const Dataset& d, const Eigen::VectorXd& beta);

}  // namespace trex
