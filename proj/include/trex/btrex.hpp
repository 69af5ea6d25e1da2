#pragma once

#include <cstdint>
#include <vector>

#include "trex/trex.hpp"
#include "trex/types.hpp"

namespace trex {

class RngStream;

struct BtrexResult {
  int b = 0;
  std::vector<int> frequencies;                    // length p, counts in [0, b]
  std::vector<int> majority_support;               // { j : frequencies[j] > b/2 }
  std::vector<std::vector<int>> per_bootstrap_supports;  // b entries, bootstrap order
  std::vector<std::uint64_t> seeds;                // child seed per bootstrap
  int failed_fits = 0;       // bootstraps whose fit threw (counted with empty support)
  int unconverged_fits = 0;  // bootstraps flagged converged=false
};

// Draws indices from {0..n-1} uniformly with replacement, one at a time,
// stopping once ceil(n (1 - 1/e)) distinct indices have been seen.
// Returned in draw order; the sample size is random and >= the distinct
// target.
std::vector<int> sequential_bootstrap_sample(int n, RngStream& rng);

// Number of distinct indices every sequential bootstrap sample contains.
int sequential_bootstrap_distinct_target(int n);

// B-TREX: b sequential bootstrap TREX fits (each on a re-standardized
// resample), aggregated by strict majority vote. Child seeds derive from
// master_seed via seed_combine, so results are identical for any thread
// count. Throws AllFitsFailed only when every bootstrap fit errored.
BtrexResult btrex_fit(const Dataset& d, int b, const TrexParams& trex_params,
                      std::uint64_t master_seed, int threads = 1);

// The k variables with the highest selection frequencies, ties broken by
// smaller index; result sorted ascending.
std::vector<int> threshold_support(const BtrexResult& result, int k);

}  // namespace trex
