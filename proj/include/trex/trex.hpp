#pragma once

#include <functional>

#include "trex/types.hpp"

namespace trex {

struct TrexParams {
  int q = 40;               // even smoothing exponent, 2..1000
  double opt_tol = 1e-7;    // minimum relative objective progress
  double prog_tol = 1e-9;   // minimum max parameter change
  int max_iter = 0;         // 0 -> max(ceil(0.2 p), 200)
  Eigen::VectorXd init;     // empty -> all zeros
  double denom_floor = 1e-12;
  bool multi_start = false;  // also try coordinate-unit starts, keep best
  int lbfgs_memory = 10;

  void validate() const;
  int resolved_max_iter(Eigen::Index p) const;
};

// Exact TREX criterion ||Y-Xb||^2 / (0.5 ||X^T(Y-Xb)||_inf) + ||b||_1.
// Throws DegenerateDenominator when the residual sup-correlation falls
// below denom_floor.
double trex_objective_exact(const Dataset& d, const Eigen::VectorXd& beta,
                            double denom_floor = 1e-12);

// Smoothed criterion with the lq norm in place of the sup norm.
double trex_objective_smooth(const Dataset& d, const Eigen::VectorXd& beta,
                             int q, double denom_floor = 1e-12);

// Analytic gradient of the smooth data-fitting term only (the l1 part is
// handled by the optimizer):
//   2||r||^2 X^T X z^(q-1) / ||z||_q^(q+1)  -  4 z / ||z||_q,  z = X^T r.
// Entrywise powers are evaluated on entries normalized by max|z_i| so
// nothing overflows at q = 40.
Eigen::VectorXd trex_gradient_smooth(const Dataset& d,
                                     const Eigen::VectorXd& beta, int q,
                                     double denom_floor = 1e-12);

// Smooth-part evaluator: returns the value at beta and, when grad is
// non-null, fills the gradient. May throw DegenerateDenominator.
using SmoothEvaluator =
    std::function<double(const Eigen::VectorXd& beta, Eigen::VectorXd* grad)>;

// Projected scaled sub-gradient minimizer of smooth(beta) + w ||beta||_1.
// Pseudo-gradient + L-BFGS scaling on the working set + Armijo
// backtracking + orthant projection (sign flips land on exact zeros).
// Stops on relative objective progress < opt_tol, max parameter change
// < prog_tol, or max_iter; line-search failure returns the best iterate
// flagged converged=false.
SparseFit pss_minimize(const SmoothEvaluator& obj_and_grad, double l1_weight,
                       const TrexParams& params);

// TREX estimate: pss_minimize on the smoothed criterion with unit l1
// weight, started from params.init (all zeros by default). objective
// holds the exact criterion at the solution, objective_smooth the
// smoothed one.
SparseFit trex_fit(const Dataset& d, const TrexParams& params = {});

}  // namespace trex
