#pragma once

#include <cstdint>
#include <vector>

#include "gdsim/feature_matrix.hpp"

namespace gdsim {

// Per-query latency scaling on random sparse instances with a fixed number
// of nonzeros per row, so cost per query is O(k * nnz) = O(k * per_row * n).
struct BenchConfig {
  std::vector<std::size_t> sizes{10000, 20000, 40000};
  std::size_t per_row = 8;
  int order = 1;
  std::size_t queries = 48;
  std::uint64_t seed = 7;
};

struct BenchPoint {
  std::size_t n = 0;
  double median_query_seconds = 0.0;
};

struct BenchResult {
  std::vector<BenchPoint> points;
  double exponent = 0.0;  // least-squares slope of log t against log n
};

// Seeded random instance: n objects, n/2 features, per_row distinct features
// per object with weights in [0.5, 1).
FeatureMatrix random_sparse_instance(std::size_t n, std::size_t per_row, std::uint64_t seed);

BenchResult run_query_scaling_bench(const BenchConfig& config);

}  // namespace gdsim
