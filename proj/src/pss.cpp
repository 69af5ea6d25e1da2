#include <cmath>
#include <deque>

#include "trex/core.hpp"
#include "trex/errors.hpp"
#include "trex/trex.hpp"

namespace trex {

void TrexParams::validate() const {
  if (q < 2 || q > 1000 || q % 2 != 0) {
    throw ConfigError("q must be an even integer in [2, 1000]");
  }
  if (!(opt_tol > 0.0) || !(prog_tol > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }
  if (max_iter < 0) throw ConfigError("max_iter must be >= 0");
  if (!(denom_floor > 0.0)) throw ConfigError("denom_floor must be positive");
  if (lbfgs_memory < 1) throw ConfigError("lbfgs_memory must be >= 1");
}

int TrexParams::resolved_max_iter(Eigen::Index p) const {
  if (max_iter > 0) return max_iter;
  int by_p = static_cast<int>(std::ceil(0.2 * static_cast<double>(p)));
  return std::max(by_p, 200);
}

namespace {

// Minimum-norm element of grad + w * subdifferential(||.||_1) at x.
// Coordinates at zero shrink toward zero only when |g_j| exceeds w.
Eigen::VectorXd pseudo_gradient(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& g, double w) {
  Eigen::VectorXd pg(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x[j] > 0.0) {
      pg[j] = g[j] + w;
    } else if (x[j] < 0.0) {
      pg[j] = g[j] - w;
    } else {
      pg[j] = soft_threshold(g[j], w);
    }
  }
  return pg;
}

}  // namespace

SparseFit pss_minimize(const SmoothEvaluator& obj_and_grad, double l1_weight,
                       const TrexParams& params) {
  params.validate();
  if (l1_weight < 0.0) throw ConfigError("l1_weight must be nonnegative");
  if (params.init.size() == 0) {
    throw ConfigError("pss_minimize requires a sized init vector");
  }
  const Eigen::Index p = params.init.size();
  const int max_iter = params.resolved_max_iter(p);
  const double armijo = 1e-4;
  const int max_halvings = 50;

  SparseFit fit;
  Eigen::VectorXd x = params.init;
  Eigen::VectorXd g(p);
  double smooth = obj_and_grad(x, &g);
  if (!std::isfinite(smooth)) {
    throw Error("evaluator is not finite at the initial point");
  }
  double objective = smooth + l1_weight * x.lpNorm<1>();
  fit.objective_trace.push_back(objective);

  struct CurvaturePair {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
    double sy;
  };
  std::deque<CurvaturePair> memory;

  bool converged = false;
  bool line_search_failed = false;
  int accepted = 0;

  Eigen::VectorXd cand(p), g_new(p);
  for (int iter = 1; iter <= max_iter; ++iter) {
    Eigen::VectorXd pg = pseudo_gradient(x, g, l1_weight);
    if (pg.cwiseAbs().maxCoeff() == 0.0) {
      converged = true;  // stationary point of the nonsmooth objective
      break;
    }

    // Quasi-Newton scaling: two-loop recursion applied to -pg.
    Eigen::VectorXd dir = -pg;
    if (!memory.empty()) {
      std::vector<double> alpha(memory.size());
      for (int i = static_cast<int>(memory.size()) - 1; i >= 0; --i) {
        alpha[static_cast<size_t>(i)] =
            memory[static_cast<size_t>(i)].s.dot(dir) /
            memory[static_cast<size_t>(i)].sy;
        dir -= alpha[static_cast<size_t>(i)] * memory[static_cast<size_t>(i)].y;
      }
      const CurvaturePair& last = memory.back();
      dir *= last.sy / last.y.squaredNorm();
      for (size_t i = 0; i < memory.size(); ++i) {
        double b = memory[i].y.dot(dir) / memory[i].sy;
        dir += (alpha[i] - b) * memory[i].s;
      }
    }
    // Restrict to the working set (active coordinates or optimality
    // violators) and keep the direction orthant-consistent with -pg.
    for (Eigen::Index j = 0; j < p; ++j) {
      bool working = x[j] != 0.0 || pg[j] != 0.0;
      if (!working || dir[j] * pg[j] > 0.0) dir[j] = 0.0;
    }
    if (!(pg.dot(dir) < 0.0)) {
      dir = -pg;  // scaled direction unusable, fall back to steepest descent
    }

    double step = 1.0;
    if (memory.empty()) {
      step = std::min(1.0, 1.0 / pg.lpNorm<1>());
    }

    double cand_objective = 0.0;
    bool step_accepted = false;
    for (int h = 0; h < max_halvings; ++h) {
      cand = x + step * dir;
      // Orthant projection: a sign flip inside the step lands on exact zero.
      for (Eigen::Index j = 0; j < p; ++j) {
        double orthant = x[j] != 0.0 ? x[j] : dir[j];
        if (cand[j] * orthant < 0.0) cand[j] = 0.0;
      }
      double cand_smooth;
      try {
        cand_smooth = obj_and_grad(cand, nullptr);
      } catch (const DegenerateDenominator&) {
        step *= 0.5;  // trial entered the degenerate region, reject
        continue;
      }
      if (!std::isfinite(cand_smooth)) {
        step *= 0.5;
        continue;
      }
      cand_objective = cand_smooth + l1_weight * cand.lpNorm<1>();
      double predicted = pg.dot(cand - x);
      if (cand_objective <= objective + armijo * predicted) {
        step_accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!step_accepted) {
      line_search_failed = true;
      break;
    }

    try {
      obj_and_grad(cand, &g_new);
    } catch (const DegenerateDenominator&) {
      line_search_failed = true;  // value fine but gradient region degenerate
      break;
    }

    Eigen::VectorXd s = cand - x;
    Eigen::VectorXd yv = g_new - g;
    double sy = s.dot(yv);
    if (sy > 1e-10 * s.norm() * yv.norm()) {
      memory.push_back({std::move(s), std::move(yv), sy});
      if (static_cast<int>(memory.size()) > params.lbfgs_memory) {
        memory.pop_front();
      }
    }

    double progress = (objective - cand_objective) / std::max(1.0, std::abs(objective));
    double max_change = (cand - x).cwiseAbs().maxCoeff();
    x = cand;
    g = g_new;
    objective = cand_objective;
    ++accepted;
    fit.objective_trace.push_back(objective);

    if (progress < params.opt_tol || max_change < params.prog_tol) {
      converged = true;
      break;
    }
  }

  fit.beta = x;
  fit.support = support_of(x);
  fit.objective = objective;
  fit.iterations = accepted;
  fit.converged = converged && !line_search_failed;
  return fit;
}

}  // namespace trex
