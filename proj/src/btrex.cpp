#include "trex/btrex.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "trex/core.hpp"
#include "trex/errors.hpp"
#include "trex/rng.hpp"

namespace trex {

int sequential_bootstrap_distinct_target(int n) {
  return static_cast<int>(std::ceil(n * (1.0 - std::exp(-1.0))));
}

std::vector<int> sequential_bootstrap_sample(int n, RngStream& rng) {
  if (n < 2) throw ConfigError("sequential bootstrap requires n >= 2");
  const int target = sequential_bootstrap_distinct_target(n);
  std::vector<int> sample;
  sample.reserve(static_cast<size_t>(n) + static_cast<size_t>(n) / 2);
  std::vector<char> seen(static_cast<size_t>(n), 0);
  int distinct = 0;
  while (distinct < target) {
    int idx = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    sample.push_back(idx);
    if (!seen[static_cast<size_t>(idx)]) {
      seen[static_cast<size_t>(idx)] = 1;
      ++distinct;
    }
  }
  return sample;
}

BtrexResult btrex_fit(const Dataset& d, int b, const TrexParams& trex_params,
                      std::uint64_t master_seed, int threads) {
  if (b < 1) throw ConfigError("b must be >= 1");
  if (threads < 1) threads = 1;

  BtrexResult result;
  result.b = b;
  result.frequencies.assign(static_cast<size_t>(d.p), 0);
  result.per_bootstrap_supports.resize(static_cast<size_t>(b));
  result.seeds.resize(static_cast<size_t>(b));
  std::vector<char> failed(static_cast<size_t>(b), 0);
  std::vector<char> unconverged(static_cast<size_t>(b), 0);

  for (int i = 0; i < b; ++i) {
    result.seeds[static_cast<size_t>(i)] =
        seed_combine(master_seed, static_cast<std::uint64_t>(i));
  }

  auto run_one = [&](int i) {
    RngStream rng(result.seeds[static_cast<size_t>(i)]);
    try {
      auto sample = sequential_bootstrap_sample(static_cast<int>(d.n), rng);
      // TREX assumes column norm sqrt(n); resampling perturbs the norms,
      // so the resampled design is re-standardized before fitting.
      Dataset resampled = subset_rows(d, sample, /*restandardize=*/true);
      SparseFit fit = trex_fit(resampled, trex_params);
      result.per_bootstrap_supports[static_cast<size_t>(i)] = fit.support;
      if (!fit.converged) unconverged[static_cast<size_t>(i)] = 1;
    } catch (const Error&) {
      failed[static_cast<size_t>(i)] = 1;  // counted with empty support
    }
  };

  if (threads == 1 || b == 1) {
    for (int i = 0; i < b; ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    int workers = std::min(threads, b);
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&]() {
        for (int i = next.fetch_add(1); i < b; i = next.fetch_add(1)) {
          run_one(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  result.failed_fits =
      static_cast<int>(std::count(failed.begin(), failed.end(), 1));
  result.unconverged_fits =
      static_cast<int>(std::count(unconverged.begin(), unconverged.end(), 1));
  if (result.failed_fits == b) {
    throw AllFitsFailed("every bootstrap TREX fit failed");
  }

  for (const auto& support : result.per_bootstrap_supports) {
    for (int j : support) ++result.frequencies[static_cast<size_t>(j)];
  }
  for (Eigen::Index j = 0; j < d.p; ++j) {
    // "more than half" is strict: 2 * count > b.
    if (2 * result.frequencies[static_cast<size_t>(j)] > b) {
      result.majority_support.push_back(static_cast<int>(j));
    }
  }
  return result;
}

std::vector<int> threshold_support(const BtrexResult& result, int k) {
  const int p = static_cast<int>(result.frequencies.size());
  if (k < 0 || k > p) throw ConfigError("k must be in [0, p]");
  std::vector<int> order(static_cast<size_t>(p));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
    if (result.frequencies[static_cast<size_t>(a)] !=
        result.frequencies[static_cast<size_t>(c)]) {
      return result.frequencies[static_cast<size_t>(a)] >
             result.frequencies[static_cast<size_t>(c)];
    }
    return a < c;  // ties to the smaller index
  });
  std::vector<int> top(order.begin(), order.begin() + k);
  std::sort(top.begin(), top.end());
  return top;
}

}  // namespace trex
