#include "trex/trex.hpp"

#include <cmath>

#include "trex/core.hpp"
#include "trex/errors.hpp"

namespace trex {

namespace {

// Shared kernel for the smoothed criterion. Entries of z = X^T r are
// normalized by their max magnitude before powering so that q = 40 (and
// anything up to q = 1000) stays inside double range.
double smooth_datafit(const Dataset& d, const Eigen::VectorXd& beta, int q,
                      double denom_floor, Eigen::VectorXd* grad) {
  Eigen::VectorXd r = d.y - d.x * beta;
  Eigen::VectorXd z = d.x.transpose() * r;
  double m = z.cwiseAbs().maxCoeff();
  if (!(m > denom_floor)) {
    throw DegenerateDenominator(
        "residual sup-correlation " + std::to_string(m) +
        " is below the floor; the criterion is undefined near an exact fit");
  }
  Eigen::ArrayXd w = z.array() / m;
  Eigen::ArrayXd w2 = w * w;
  double sq = w2.pow(q / 2).sum();  // sum of (|z_i|/m)^q, in [1, p]
  double s1q = std::pow(sq, 1.0 / q);
  double lq = m * s1q;  // ||z||_q
  double rsq = r.squaredNorm();
  double value = 2.0 * rsq / lq;

  if (grad) {
    Eigen::ArrayXd u = w * w2.pow((q - 2) / 2);  // (z_i/m)^(q-1), sign kept
    Eigen::VectorXd xtxu = d.x.transpose() * (d.x * u.matrix());
    double denom1 = m * m * sq * s1q;  // m^2 * sq^((q+1)/q)
    *grad = (2.0 * rsq / denom1) * xtxu - (4.0 / s1q) * w.matrix();
  }
  return value;
}

}  // namespace

double trex_objective_exact(const Dataset& d, const Eigen::VectorXd& beta,
                            double denom_floor) {
  if (beta.size() != d.p) throw DimensionMismatch("beta length does not match p");
  Eigen::VectorXd r = d.y - d.x * beta;
  double denom = (d.x.transpose() * r).cwiseAbs().maxCoeff();
  if (!(denom > denom_floor)) {
    throw DegenerateDenominator("residual sup-correlation is below the floor");
  }
  return r.squaredNorm() / (0.5 * denom) + beta.lpNorm<1>();
}

double trex_objective_smooth(const Dataset& d, const Eigen::VectorXd& beta,
                             int q, double denom_floor) {
  if (beta.size() != d.p) throw DimensionMismatch("beta length does not match p");
  if (q < 2 || q % 2 != 0) throw ConfigError("q must be even and >= 2");
  return smooth_datafit(d, beta, q, denom_floor, nullptr) + beta.lpNorm<1>();
}

Eigen::VectorXd trex_gradient_smooth(const Dataset& d,
                                     const Eigen::VectorXd& beta, int q,
                                     double denom_floor) {
  if (beta.size() != d.p) throw DimensionMismatch("beta length does not match p");
  if (q < 2 || q % 2 != 0) throw ConfigError("q must be even and >= 2");
  Eigen::VectorXd grad(d.p);
  smooth_datafit(d, beta, q, denom_floor, &grad);
  return grad;
}

SparseFit trex_fit(const Dataset& d, const TrexParams& params) {
  params.validate();
  TrexParams run = params;
  if (run.init.size() == 0) {
    run.init = Eigen::VectorXd::Zero(d.p);
  } else if (run.init.size() != d.p) {
    throw DimensionMismatch("init length does not match p");
  }

  SmoothEvaluator eval = [&d, q = run.q, floor = run.denom_floor](
                             const Eigen::VectorXd& b, Eigen::VectorXd* g) {
    return smooth_datafit(d, b, q, floor, g);
  };

  auto solve_from = [&](const Eigen::VectorXd& start) {
    TrexParams local = run;
    local.init = start;
    SparseFit fit;
    try {
      fit = pss_minimize(eval, 1.0, local);
    } catch (const DegenerateDenominator&) {
      // Criterion undefined at the start (exact fit, e.g. Y = 0): the
      // start is a fixed point, return it unchanged.
      fit.beta = start;
      fit.support = support_of(start);
      fit.objective = start.lpNorm<1>();
      fit.objective_smooth = fit.objective;
      fit.iterations = 0;
      fit.converged = true;
      return fit;
    }
    fit.objective_smooth = fit.objective;
    try {
      fit.objective = trex_objective_exact(d, fit.beta, run.denom_floor);
    } catch (const DegenerateDenominator&) {
      fit.objective = fit.beta.lpNorm<1>();
    }
    return fit;
  };

  SparseFit best = solve_from(run.init);
  if (run.multi_start) {
    for (Eigen::Index j = 0; j < d.p; ++j) {
      Eigen::VectorXd start = Eigen::VectorXd::Zero(d.p);
      start[j] = 1.0;
      SparseFit candidate = solve_from(start);
      if (candidate.objective < best.objective) best = std::move(candidate);
    }
  }
  return best;
}

}  // namespace trex
