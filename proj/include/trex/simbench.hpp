#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trex/lasso.hpp"
#include "trex/trex.hpp"
#include "trex/types.hpp"

namespace trex {

enum class Method { LassoCV, Trex, Btrex, SqrtLasso };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct SynthConfig {
  int n = 100;
  int p = 500;
  Eigen::VectorXd beta_star;  // empty -> (1,1,1,1,1,0,...,0)
  double sigma = 0.5;         // noise standard deviation
  double kappa = 0.0;         // equicorrelation, in [0, 1)
  std::uint64_t seed = 0;

  Eigen::VectorXd resolved_beta_star() const;
  void validate() const;
};

struct SynthInstance {
  Dataset data;
  Eigen::VectorXd beta_star;
  Eigen::VectorXd eps;
  double sigma = 0.0;
};

struct ExperimentRecord {
  Method method = Method::Trex;
  SynthConfig config;
  int repetition = 0;
  int hamming = 0;
  int support_size = 0;
  double runtime_secs = 0.0;
  bool converged = false;
};

struct MethodParams {
  TrexParams trex;
  LassoParams lasso;
  int b = 31;          // B-TREX bootstraps
  int cv_folds = 10;   // Lasso-CV folds
  double sqrt_lasso_gamma = 0.0;  // 0 -> pivotal default for (n, p)
};

// Rows x_i = sqrt(1-kappa) z + sqrt(kappa) g 1 with z ~ N(0, I_p) and a
// scalar g ~ N(0,1), the exact factorization of the equicorrelation
// covariance (1-kappa) I + kappa 11^T. Columns are then rescaled to
// l2 norm sqrt(n) and Y = X beta_star + sigma eps is formed in that
// normalized scale.
SynthInstance generate_synthetic(const SynthConfig& cfg);

// |est symmetric-difference truth|, i.e. the Hamming distance between
// the two p-length indicator vectors.
int hamming_distance(const std::vector<int>& est_support,
                     const std::vector<int>& true_support, int p);

// Runs every method on one shared dataset per (config, repetition) cell;
// the dataset seed derives from (master_seed, config index, repetition).
// Per-record failures are captured in the converged flag, never aborting
// the matrix. threads > 1 parallelizes over cells (records are seed-
// deterministic, so execution order does not matter).
std::vector<ExperimentRecord> run_experiment(
    const std::vector<SynthConfig>& configs, const std::vector<Method>& methods,
    int reps, std::uint64_t master_seed, const MethodParams& params = {},
    int threads = 1);

struct BenchRecord {
  std::string method;  // "trex" or "lasso-path"
  int n = 0;
  int p = 0;
  int repetition = 0;
  double runtime_secs = 0.0;
};

struct BenchSummary {
  std::string method;
  std::vector<int> p_grid;
  std::vector<double> median_runtime;  // one entry per p
  bool has_exponent = false;
  double exponent = 0.0;  // log-log least-squares slope over the grid
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::vector<BenchSummary> summaries;
};

// Wall-clock scaling of a single TREX fit vs a single (plain) Lasso path
// as p grows. Runs strictly sequentially on one thread; medians over reps.
BenchResult runtime_scaling(const std::vector<int>& p_grid,
                            const SynthConfig& base_cfg, int reps,
                            const MethodParams& params = {});

struct KfoldResult {
  double mean_error = 0.0;
  double median_support_size = 0.0;
  int excluded_folds = 0;  // folds whose fit errored
};

// K-fold prediction error of one method (folds = n gives LOOCV). Each
// training fold is re-standardized before fitting and coefficients are
// mapped back for prediction; refit applies a least-squares refit on the
// selected support before predicting.
KfoldResult kfold_prediction_error(const Dataset& d, Method method, int folds,
                                   bool refit, std::uint64_t seed,
                                   const MethodParams& params = {});

}  // namespace trex
