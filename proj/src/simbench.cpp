#include "trex/simbench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

#include "trex/btrex.hpp"
#include "trex/core.hpp"
#include "trex/errors.hpp"
#include "trex/rng.hpp"

namespace trex {

std::string method_name(Method m) {
  switch (m) {
    case Method::LassoCV: return "lasso-cv";
    case Method::Trex: return "trex";
    case Method::Btrex: return "btrex";
    case Method::SqrtLasso: return "sqrt-lasso";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "lasso-cv") return Method::LassoCV;
  if (name == "trex") return Method::Trex;
  if (name == "btrex") return Method::Btrex;
  if (name == "sqrt-lasso") return Method::SqrtLasso;
  throw ConfigError("unknown method '" + name + "'");
}

void SynthConfig::validate() const {
  if (n < 2) throw ConfigError("n must be >= 2");
  if (p < 1) throw ConfigError("p must be >= 1");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (kappa < 0.0 || kappa >= 1.0) throw ConfigError("kappa must be in [0, 1)");
  if (beta_star.size() > 0 && beta_star.size() != p) {
    throw ConfigError("beta_star length does not match p");
  }
}

Eigen::VectorXd SynthConfig::resolved_beta_star() const {
  if (beta_star.size() > 0) return beta_star;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
  for (int j = 0; j < std::min(5, p); ++j) b[j] = 1.0;
  return b;
}

SynthInstance generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  RngStream rng(cfg.seed);

  SynthInstance inst;
  inst.sigma = cfg.sigma;
  inst.beta_star = cfg.resolved_beta_star();

  const double sk = std::sqrt(cfg.kappa);
  const double s1k = std::sqrt(1.0 - cfg.kappa);
  Eigen::MatrixXd x(cfg.n, cfg.p);
  for (int i = 0; i < cfg.n; ++i) {
    double shared = sk * rng.normal();
    for (int j = 0; j < cfg.p; ++j) {
      x(i, j) = s1k * rng.normal() + shared;
    }
  }

  inst.data.col_scales = standardize_columns(x);
  inst.eps.resize(cfg.n);
  for (int i = 0; i < cfg.n; ++i) inst.eps[i] = rng.normal();

  // beta_star lives in the normalized scale: Y is formed after the
  // columns are rescaled to norm sqrt(n).
  inst.data.y = x * inst.beta_star + cfg.sigma * inst.eps;
  inst.data.x = std::move(x);
  inst.data.n = cfg.n;
  inst.data.p = cfg.p;
  return inst;
}

int hamming_distance(const std::vector<int>& est_support,
                     const std::vector<int>& true_support, int p) {
  std::vector<char> est(static_cast<size_t>(p), 0);
  std::vector<char> tru(static_cast<size_t>(p), 0);
  for (int j : est_support) {
    if (j < 0 || j >= p) throw ConfigError("support index out of range");
    est[static_cast<size_t>(j)] = 1;
  }
  for (int j : true_support) {
    if (j < 0 || j >= p) throw ConfigError("support index out of range");
    tru[static_cast<size_t>(j)] = 1;
  }
  int dist = 0;
  for (int j = 0; j < p; ++j) {
    if (est[static_cast<size_t>(j)] != tru[static_cast<size_t>(j)]) ++dist;
  }
  return dist;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// One method on one prepared instance. Exceptions surface as an
// unconverged record with empty support.
ExperimentRecord run_method(Method method, const SynthInstance& inst,
                            const MethodParams& params,
                            std::uint64_t method_seed) {
  ExperimentRecord rec;
  rec.method = method;
  std::vector<int> support;
  auto start = Clock::now();
  try {
    switch (method) {
      case Method::LassoCV: {
        CvResult cv =
            lasso_cv(inst.data, params.cv_folds, params.lasso, method_seed);
        support = cv.fit.support;
        rec.converged = cv.fit.converged;
        break;
      }
      case Method::Trex: {
        SparseFit fit = trex_fit(inst.data, params.trex);
        support = fit.support;
        rec.converged = fit.converged;
        break;
      }
      case Method::Btrex: {
        BtrexResult fit = btrex_fit(inst.data, params.b, params.trex, method_seed);
        support = fit.majority_support;
        rec.converged = fit.failed_fits == 0 && fit.unconverged_fits == 0;
        break;
      }
      case Method::SqrtLasso: {
        double gamma = params.sqrt_lasso_gamma > 0.0
                           ? params.sqrt_lasso_gamma
                           : default_sqrt_lasso_gamma(inst.data.n, inst.data.p);
        SparseFit fit = sqrt_lasso_fit(inst.data, gamma, params.lasso);
        support = fit.support;
        rec.converged = fit.converged;
        break;
      }
    }
  } catch (const Error&) {
    rec.converged = false;
  }
  rec.runtime_secs = seconds_since(start);
  rec.support_size = static_cast<int>(support.size());
  rec.hamming = hamming_distance(support, support_of(inst.beta_star),
                                 static_cast<int>(inst.data.p));
  return rec;
}

}  // namespace

std::vector<ExperimentRecord> run_experiment(
    const std::vector<SynthConfig>& configs, const std::vector<Method>& methods,
    int reps, std::uint64_t master_seed, const MethodParams& params,
    int threads) {
  if (reps < 1) throw ConfigError("reps must be >= 1");
  if (configs.empty() || methods.empty()) {
    throw ConfigError("need at least one config and one method");
  }
  for (const auto& cfg : configs) cfg.validate();
  if (threads < 1) threads = 1;

  const size_t cells = configs.size() * static_cast<size_t>(reps);
  std::vector<std::vector<ExperimentRecord>> per_cell(cells);

  auto run_cell = [&](size_t cell) {
    size_t ci = cell / static_cast<size_t>(reps);
    int rep = static_cast<int>(cell % static_cast<size_t>(reps));

    SynthConfig cfg = configs[ci];
    // One dataset per (config, repetition), shared by every method so
    // between-method differences carry no sampling noise.
    cfg.seed = seed_combine(seed_combine(master_seed, ci), static_cast<std::uint64_t>(rep));
    SynthInstance inst = generate_synthetic(cfg);

    per_cell[cell].reserve(methods.size());
    for (size_t mi = 0; mi < methods.size(); ++mi) {
      std::uint64_t method_seed = seed_combine(cfg.seed, mi + 1);
      ExperimentRecord rec = run_method(methods[mi], inst, params, method_seed);
      rec.config = cfg;
      rec.repetition = rep;
      per_cell[cell].push_back(std::move(rec));
    }
  };

  if (threads == 1) {
    for (size_t cell = 0; cell < cells; ++cell) run_cell(cell);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    size_t workers = std::min(static_cast<size_t>(threads), cells);
    pool.reserve(workers);
    for (size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&]() {
        for (size_t c = next.fetch_add(1); c < cells; c = next.fetch_add(1)) {
          run_cell(c);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<ExperimentRecord> records;
  records.reserve(cells * methods.size());
  for (auto& cell : per_cell) {
    for (auto& rec : cell) records.push_back(std::move(rec));
  }
  return records;
}

namespace {

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

BenchResult runtime_scaling(const std::vector<int>& p_grid,
                            const SynthConfig& base_cfg, int reps,
                            const MethodParams& params) {
  if (p_grid.empty()) throw ConfigError("p_grid must be non-empty");
  for (size_t i = 0; i + 1 < p_grid.size(); ++i) {
    if (p_grid[i] >= p_grid[i + 1]) throw ConfigError("p_grid must be increasing");
  }
  if (reps < 1) throw ConfigError("reps must be >= 1");

  BenchResult out;
  const std::vector<std::string> names = {"trex", "lasso-path"};
  std::vector<BenchSummary> summaries(2);
  for (size_t m = 0; m < 2; ++m) {
    summaries[m].method = names[m];
    summaries[m].p_grid = p_grid;
  }

  for (int p : p_grid) {
    std::vector<std::vector<double>> times(2);
    for (int rep = 0; rep < reps; ++rep) {
      SynthConfig cfg = base_cfg;
      cfg.p = p;
      cfg.beta_star = Eigen::VectorXd();  // default signal for this p
      cfg.seed = seed_combine(seed_combine(base_cfg.seed, static_cast<std::uint64_t>(p)),
                              static_cast<std::uint64_t>(rep));
      SynthInstance inst = generate_synthetic(cfg);

      auto t0 = Clock::now();
      trex_fit(inst.data, params.trex);
      times[0].push_back(seconds_since(t0));

      auto t1 = Clock::now();
      lasso_path(inst.data, params.lasso);
      times[1].push_back(seconds_since(t1));

      for (size_t m = 0; m < 2; ++m) {
        out.records.push_back(
            {names[m], cfg.n, p, rep, times[m][static_cast<size_t>(rep)]});
      }
    }
    for (size_t m = 0; m < 2; ++m) {
      summaries[m].median_runtime.push_back(median_of(times[m]));
    }
  }

  // Empirical exponent: least-squares slope of log(median time) on log(p).
  for (auto& s : summaries) {
    if (s.p_grid.size() >= 2) {
      double mx = 0, my = 0;
      size_t k = s.p_grid.size();
      for (size_t i = 0; i < k; ++i) {
        mx += std::log(static_cast<double>(s.p_grid[i]));
        my += std::log(std::max(s.median_runtime[i], 1e-12));
      }
      mx /= static_cast<double>(k);
      my /= static_cast<double>(k);
      double sxx = 0, sxy = 0;
      for (size_t i = 0; i < k; ++i) {
        double dx = std::log(static_cast<double>(s.p_grid[i])) - mx;
        double dy = std::log(std::max(s.median_runtime[i], 1e-12)) - my;
        sxx += dx * dx;
        sxy += dx * dy;
      }
      s.exponent = sxy / sxx;
      s.has_exponent = true;
    }
  }
  out.summaries = std::move(summaries);
  return out;
}

KfoldResult kfold_prediction_error(const Dataset& d, Method method, int folds,
                                   bool refit, std::uint64_t seed,
                                   const MethodParams& params) {
  if (folds < 2 || folds > d.n) throw ConfigError("folds must be in [2, n]");

  // Same fold scheme as lasso_cv: seeded shuffle, contiguous blocks.
  std::vector<int> idx(static_cast<size_t>(d.n));
  std::iota(idx.begin(), idx.end(), 0);
  RngStream rng(seed);
  for (size_t i = idx.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.uniform_int(i));
    std::swap(idx[i - 1], idx[j]);
  }

  std::vector<double> errors;
  std::vector<double> support_sizes;
  int excluded = 0;

  for (int k = 0; k < folds; ++k) {
    size_t lo = static_cast<size_t>(k) * static_cast<size_t>(d.n) /
                static_cast<size_t>(folds);
    size_t hi = static_cast<size_t>(k + 1) * static_cast<size_t>(d.n) /
                static_cast<size_t>(folds);
    std::vector<int> held(idx.begin() + lo, idx.begin() + hi);
    std::vector<char> is_held(static_cast<size_t>(d.n), 0);
    for (int i : held) is_held[static_cast<size_t>(i)] = 1;
    std::vector<int> train;
    for (Eigen::Index i = 0; i < d.n; ++i) {
      if (!is_held[static_cast<size_t>(i)]) train.push_back(static_cast<int>(i));
    }
    if (static_cast<Eigen::Index>(train.size()) < 2) {
      throw FoldTooSmall("a training fold has fewer than 2 observations");
    }

    try {
      Dataset dt = subset_rows(d, train, /*restandardize=*/true);
      std::uint64_t fold_seed = seed_combine(seed, static_cast<std::uint64_t>(k) + 1);

      Eigen::VectorXd beta_std;
      switch (method) {
        case Method::LassoCV: {
          int inner = std::min(params.cv_folds, static_cast<int>(dt.n));
          beta_std = lasso_cv(dt, inner, params.lasso, fold_seed).fit.beta;
          break;
        }
        case Method::Trex:
          beta_std = trex_fit(dt, params.trex).beta;
          break;
        case Method::Btrex: {
          BtrexResult r = btrex_fit(dt, params.b, params.trex, fold_seed);
          // Majority vote yields a support, not coefficients; predict via
          // the least-squares refit on that support.
          beta_std = least_squares_refit(dt, r.majority_support);
          break;
        }
        case Method::SqrtLasso: {
          double gamma = params.sqrt_lasso_gamma > 0.0
                             ? params.sqrt_lasso_gamma
                             : default_sqrt_lasso_gamma(dt.n, dt.p);
          beta_std = sqrt_lasso_fit(dt, gamma, params.lasso).beta;
          break;
        }
      }

      std::vector<int> support = support_of(beta_std);
      if (refit) beta_std = least_squares_refit(dt, support);

      // Map the training-scale coefficients back to this dataset's scale.
      Eigen::VectorXd beta = beta_std.array() / dt.col_scales.array();
      double err = 0.0;
      for (int i : held) {
        double pred = d.x.row(i).dot(beta);
        err += (d.y[i] - pred) * (d.y[i] - pred);
      }
      errors.push_back(err / static_cast<double>(held.size()));
      support_sizes.push_back(static_cast<double>(support.size()));
    } catch (const Error&) {
      ++excluded;
    }
  }

  KfoldResult result;
  result.excluded_folds = excluded;
  if (!errors.empty()) {
    result.mean_error =
        std::accumulate(errors.begin(), errors.end(), 0.0) /
        static_cast<double>(errors.size());
    result.median_support_size = median_of(support_sizes);
  }
  return result;
}

}  // namespace trex
