#include "trex/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trex/core.hpp"
#include "trex/errors.hpp"
#include "trex/rng.hpp"

namespace trex {

void LassoParams::validate() const {
  if (cd_tol <= 0.0) throw ConfigError("cd_tol must be positive");
  if (max_sweeps < 1) throw ConfigError("max_sweeps must be >= 1");
  for (Eigen::Index k = 0; k + 1 < lambda_grid.size(); ++k) {
    if (!(lambda_grid[k] > lambda_grid[k + 1])) {
      throw ConfigError("lambda_grid must be strictly decreasing");
    }
  }
  if (lambda_grid.size() > 0 && !(lambda_grid[lambda_grid.size() - 1] > 0.0)) {
    throw ConfigError("lambda_grid must be positive");
  }
}

double kkt_violation(const Dataset& d, const Eigen::VectorXd& beta,
                     double lambda) {
  Eigen::VectorXd z = (2.0 / static_cast<double>(d.n)) *
                      (d.x.transpose() * (d.y - d.x * beta));
  double worst = 0.0;
  for (Eigen::Index j = 0; j < d.p; ++j) {
    double v;
    if (beta[j] != 0.0) {
      v = std::abs(z[j] - lambda * (beta[j] > 0 ? 1.0 : -1.0)) / (1e-4 * lambda);
    } else {
      v = std::abs(z[j]) / (lambda * (1.0 + 1e-4));
    }
    worst = std::max(worst, v);
  }
  return worst;
}

SparseFit lasso_fit(const Dataset& d, double lambda, const LassoParams& params,
                    const Eigen::VectorXd& init) {
  params.validate();
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (init.size() != d.p) {
    throw DimensionMismatch("init length " + std::to_string(init.size()) +
                            " does not match p = " + std::to_string(d.p));
  }

  const double n = static_cast<double>(d.n);
  const Eigen::Index p = d.p;
  // Exact column norms: fold subsets and bootstrap designs do not keep
  // the sqrt(n) normalization, and the coordinate minimizer depends on them.
  Eigen::VectorXd col_sq(p);
  for (Eigen::Index j = 0; j < p; ++j) col_sq[j] = d.x.col(j).squaredNorm();

  SparseFit fit;
  fit.beta = init;
  Eigen::VectorXd r = d.y - d.x * fit.beta;
  const double half_nl = 0.5 * n * lambda;

  auto objective = [&]() {
    return r.squaredNorm() / n + lambda * fit.beta.template lpNorm<1>();
  };

  auto sweep = [&](bool active_only) {
    double delta_max = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      double old = fit.beta[j];
      if (active_only && old == 0.0) continue;
      double a = d.x.col(j).dot(r) + col_sq[j] * old;
      double next = soft_threshold(a, half_nl) / col_sq[j];
      if (next != old) {
        r -= (next - old) * d.x.col(j);
        fit.beta[j] = next;
        delta_max = std::max(delta_max, std::abs(next - old));
      }
    }
    return delta_max;
  };

  bool full_pass = true;
  int sweeps = 0;
  while (sweeps < params.max_sweeps) {
    ++sweeps;
    double delta = sweep(!full_pass);
    fit.objective_trace.push_back(objective());
    if (full_pass) {
      if (delta < params.cd_tol && kkt_violation(d, fit.beta, lambda) <= 0.5) {
        fit.converged = true;
        break;
      }
      full_pass = false;
    } else if (delta < params.cd_tol) {
      full_pass = true;  // active set stable; verify with a full pass
    }
  }

  fit.iterations = sweeps;
  fit.objective = objective();
  fit.support = support_of(fit.beta);
  return fit;
}

Eigen::VectorXd default_lambda_grid(const Dataset& d, int count, double ratio) {
  if (count < 2) throw ConfigError("grid count must be >= 2");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("ratio must be in (0,1)");
  double lambda_max =
      2.0 * (d.x.transpose() * d.y).cwiseAbs().maxCoeff() / static_cast<double>(d.n);
  Eigen::VectorXd grid(count);
  for (int k = 0; k < count; ++k) {
    grid[k] = lambda_max * std::pow(ratio, static_cast<double>(k) / (count - 1));
  }
  return grid;
}

std::vector<SparseFit> lasso_path(const Dataset& d, const LassoParams& params) {
  Eigen::VectorXd grid =
      params.lambda_grid.size() > 0 ? params.lambda_grid : default_lambda_grid(d);
  if (grid.size() == 0) throw ConfigError("empty lambda grid");

  std::vector<SparseFit> path;
  path.reserve(static_cast<size_t>(grid.size()));
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(d.p);
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    SparseFit fit = lasso_fit(d, grid[k], params, warm);
    if (params.warm_start) warm = fit.beta;
    path.push_back(std::move(fit));
  }
  return path;
}

namespace {

std::vector<std::vector<int>> make_folds(Eigen::Index n, int folds,
                                         std::uint64_t seed) {
  std::vector<int> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  RngStream rng(seed);
  for (size_t i = idx.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.uniform_int(i));
    std::swap(idx[i - 1], idx[j]);
  }
  std::vector<std::vector<int>> out(static_cast<size_t>(folds));
  for (int k = 0; k < folds; ++k) {
    size_t lo = static_cast<size_t>(k) * static_cast<size_t>(n) /
                static_cast<size_t>(folds);
    size_t hi = static_cast<size_t>(k + 1) * static_cast<size_t>(n) /
                static_cast<size_t>(folds);
    out[static_cast<size_t>(k)].assign(idx.begin() + lo, idx.begin() + hi);
    std::sort(out[static_cast<size_t>(k)].begin(),
              out[static_cast<size_t>(k)].end());
  }
  return out;
}

}  // namespace

CvResult lasso_cv(const Dataset& d, int folds, const LassoParams& params,
                  std::uint64_t seed) {
  if (folds < 2 || folds > d.n) {
    throw ConfigError("folds must be in [2, n]");
  }
  Eigen::VectorXd grid =
      params.lambda_grid.size() > 0 ? params.lambda_grid : default_lambda_grid(d);
  LassoParams fold_params = params;
  fold_params.lambda_grid = grid;

  auto fold_sets = make_folds(d.n, folds, seed);
  for (const auto& held : fold_sets) {
    if (d.n - static_cast<Eigen::Index>(held.size()) < 2) {
      throw FoldTooSmall("a training fold has fewer than 2 observations");
    }
  }

  Eigen::VectorXd cv_errors = Eigen::VectorXd::Zero(grid.size());
  for (const auto& held : fold_sets) {
    std::vector<char> is_held(static_cast<size_t>(d.n), 0);
    for (int i : held) is_held[static_cast<size_t>(i)] = 1;
    std::vector<int> train;
    train.reserve(static_cast<size_t>(d.n) - held.size());
    for (Eigen::Index i = 0; i < d.n; ++i) {
      if (!is_held[static_cast<size_t>(i)]) train.push_back(static_cast<int>(i));
    }

    Dataset dt = subset_rows(d, train, /*restandardize=*/false);
    auto path = lasso_path(dt, fold_params);

    for (Eigen::Index k = 0; k < grid.size(); ++k) {
      double err = 0.0;
      for (int i : held) {
        double pred = d.x.row(i).dot(path[static_cast<size_t>(k)].beta);
        err += (d.y[i] - pred) * (d.y[i] - pred);
      }
      cv_errors[k] += err / static_cast<double>(held.size());
    }
  }
  cv_errors /= static_cast<double>(folds);

  // Grid is descending, so scanning with strict '<' breaks ties toward
  // the larger (sparser) lambda.
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < grid.size(); ++k) {
    if (cv_errors[k] < cv_errors[best]) best = k;
  }

  CvResult result;
  result.lambda_star = grid[best];
  result.cv_errors = cv_errors;
  result.fold_count = folds;

  // Retrain on the full dataset, warm-starting down the grid to lambda_star.
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(d.p);
  for (Eigen::Index k = 0; k <= best; ++k) {
    result.fit = lasso_fit(d, grid[k], fold_params, warm);
    if (fold_params.warm_start) warm = result.fit.beta;
  }
  return result;
}

namespace {

// Acklam's rational approximation to the standard normal quantile,
// polished with one Halley step on erfc.
double inverse_normal_cdf(double u) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (u < plow) {
    double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  } else if (u <= 1.0 - plow) {
    double q = u - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }
  double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - u;
  double h = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - h / (1.0 + x * h / 2.0);
}

}  // namespace

double default_sqrt_lasso_gamma(Eigen::Index n, Eigen::Index p) {
  double alpha = 0.05;
  return 1.1 * inverse_normal_cdf(1.0 - alpha / (2.0 * static_cast<double>(p))) /
         std::sqrt(static_cast<double>(n));
}

SparseFit sqrt_lasso_fit(const Dataset& d, double gamma,
                         const LassoParams& params) {
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  const double n = static_cast<double>(d.n);
  const double y_norm = d.y.norm();
  if (y_norm < 1e-300) {
    throw ExactFit("response is exactly interpolated (zero response)");
  }

  SparseFit fit;
  fit.beta = Eigen::VectorXd::Zero(d.p);
  double sigma_hat = y_norm / std::sqrt(n);
  int outer = 0;
  bool scale_converged = false;
  bool inner_converged = true;

  for (outer = 1; outer <= 100; ++outer) {
    double lambda = 2.0 * gamma * sigma_hat;
    SparseFit inner = lasso_fit(d, lambda, params, fit.beta);
    fit.beta = inner.beta;
    inner_converged = inner.converged;

    double res_norm = (d.y - d.x * fit.beta).norm();
    if (res_norm < 1e-10 * y_norm) {
      throw ExactFit("residual norm collapsed during scale iteration");
    }
    double next_sigma = res_norm / std::sqrt(n);
    bool done = std::abs(next_sigma - sigma_hat) < 1e-6 * sigma_hat;
    sigma_hat = next_sigma;
    fit.objective_trace.push_back(sigma_hat + gamma * fit.beta.lpNorm<1>());
    if (done) {
      scale_converged = true;
      break;
    }
  }

  fit.iterations = outer;
  fit.converged = scale_converged && inner_converged;
  fit.objective = sigma_hat + gamma * fit.beta.lpNorm<1>();
  fit.support = support_of(fit.beta);
  return fit;
}

Lemma1Report lemma1_check(const Dataset& d, const Eigen::VectorXd& beta_star,
                          double sigma, const Eigen::VectorXd& eps,
                          double lambda, const SparseFit& fit) {
  if (beta_star.size() != d.p || fit.beta.size() != d.p) {
    throw DimensionMismatch("beta length does not match p");
  }
  if (eps.size() != d.n) {
    throw DimensionMismatch("eps length does not match n");
  }
  Lemma1Report report;
  const double n = static_cast<double>(d.n);
  report.lhs = (d.x * (fit.beta - beta_star)).squaredNorm() / n;
  report.rhs = 2.0 * lambda * beta_star.lpNorm<1>();
  double threshold = 2.0 * sigma * (d.x.transpose() * eps).cwiseAbs().maxCoeff() / n;
  report.condition = lambda >= threshold;
  report.pass = !report.condition || report.lhs <= report.rhs * (1.0 + 1e-6);
  return report;
}

}  // namespace trex
