#pragma once

#include <cstdint>
#include <vector>

#include "trex/types.hpp"

namespace trex {

struct LassoParams {
  Eigen::VectorXd lambda_grid;  // strictly decreasing, positive; empty -> default grid
  double cd_tol = 1e-7;         // max coefficient change per sweep
  int max_sweeps = 10000;
  bool warm_start = true;

  void validate() const;
};

struct CvResult {
  double lambda_star = 0.0;
  Eigen::VectorXd cv_errors;  // mean held-out MSE per grid point
  SparseFit fit;              // retrained on the full dataset at lambda_star
  int fold_count = 0;
};

struct Lemma1Report {
  double lhs = 0.0;        // ||X beta_hat - X beta_star||^2 / n
  double rhs = 0.0;        // 2 lambda ||beta_star||_1
  bool condition = false;  // lambda >= 2 sigma ||X^T eps||_inf / n
  bool pass = false;       // vacuous when condition is false
};

// Coordinate-descent Lasso: min ||Y - X beta||^2 / n + lambda ||beta||_1.
// The gradient carries a 2/n factor under this convention, so the KKT
// conditions read 2 X_j^T r / n = lambda sign(beta_j) on the active set.
// Columns need not have norm sqrt(n); the update uses exact column norms.
// Hitting max_sweeps flags converged=false rather than throwing.
SparseFit lasso_fit(const Dataset& d, double lambda, const LassoParams& params,
                    const Eigen::VectorXd& init);

// Fits every grid point in order, warm-starting each fit from the
// previous (larger) lambda when params.warm_start.
std::vector<SparseFit> lasso_path(const Dataset& d, const LassoParams& params);

// Geometric grid of `count` points from lambda_max = 2||X^T Y||_inf / n
// down to ratio * lambda_max.
Eigen::VectorXd default_lambda_grid(const Dataset& d, int count = 100,
                                    double ratio = 1e-4);

// K-fold cross-validation over the lambda grid. Folds are a seeded
// shuffle of {0..n-1} split into contiguous near-equal blocks. Ties in
// the CV error go to the larger lambda (sparser model).
CvResult lasso_cv(const Dataset& d, int folds, const LassoParams& params,
                  std::uint64_t seed);

// Square-Root Lasso: min ||Y - X beta||_2 / sqrt(n) + gamma ||beta||_1,
// solved by alternating scale estimation (sigma_hat <- ||r||/sqrt(n),
// beta <- lasso at lambda = 2 gamma sigma_hat). Throws ExactFit when the
// residual norm collapses below 1e-10 ||Y||.
SparseFit sqrt_lasso_fit(const Dataset& d, double gamma,
                         const LassoParams& params);

// Pivotal default for gamma: 1.1 * qnorm(1 - 0.05 / (2p)) / sqrt(n).
double default_sqrt_lasso_gamma(Eigen::Index n, Eigen::Index p);

// Evaluates the Lasso prediction bound on a synthetic instance where
// Y = X beta_star + sigma * eps is known exactly.
Lemma1Report lemma1_check(const Dataset& d, const Eigen::VectorXd& beta_star,
                          double sigma, const Eigen::VectorXd& eps,
                          double lambda, const SparseFit& fit);

// Max KKT violation of a fit, scaled so values <= 1 satisfy the stated
// tolerance (1e-4 relative on active coordinates, lambda(1+1e-4) bound on
// inactive ones).
double kkt_violation(const Dataset& d, const Eigen::VectorXd& beta,
                     double lambda);

}  // namespace trex
