#include "gdsim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

#include "gdsim/diffusion.hpp"
#include "gdsim/rng.hpp"

namespace gdsim {

FeatureMatrix random_sparse_instance(std::size_t n, std::size_t per_row, std::uint64_t seed) {
  const std::size_t m = std::max<std::size_t>(2, n / 2);
  SplitMix64 rng(seed);
  std::vector<Triplet> entries;
  entries.reserve(n * per_row);
  std::set<std::size_t> picked;
  for (std::size_t i = 0; i < n; ++i) {
    picked.clear();
    while (picked.size() < std::min(per_row, m)) picked.insert(rng.below(m));
    for (std::size_t s : picked) entries.push_back({i, s, 0.5 + 0.5 * rng.uniform()});
  }
  return FeatureMatrix::build(std::move(entries), n, m, StorageMode::kSparse);
}

BenchResult run_query_scaling_bench(const BenchConfig& config) {
  using clock = std::chrono::steady_clock;
  if (config.sizes.size() < 2) throw std::invalid_argument("bench needs at least two sizes");

  BenchResult result;
  for (std::size_t idx = 0; idx < config.sizes.size(); ++idx) {
    const std::size_t n = config.sizes[idx];
    FeatureMatrix w = random_sparse_instance(n, config.per_row, derive_seed(config.seed, idx));
    const DiffusionOperator op(std::move(w));

    SplitMix64 query_rng(derive_seed(config.seed, 1000 + idx));
    std::vector<double> samples;
    samples.reserve(config.queries);
    // A few untimed queries warm caches and the allocator.
    for (int warm = 0; warm < 3; ++warm)
      forward_row(op, query_rng.below(n), config.order);
    for (std::size_t qi = 0; qi < config.queries; ++qi) {
      const std::size_t query = query_rng.below(n);
      const auto t0 = clock::now();
      volatile double sink = forward_row(op, query, config.order).scores[0];
      (void)sink;
      const auto t1 = clock::now();
      samples.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(samples.begin(), samples.end());
    result.points.push_back({n, samples[samples.size() / 2]});
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = static_cast<double>(result.points.size());
  for (const auto& pt : result.points) {
    const double x = std::log(static_cast<double>(pt.n));
    const double y = std::log(pt.median_query_seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  result.exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return result;
}

}  // namespace gdsim
