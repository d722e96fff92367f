#pragma once

#include <cstdint>
#include <vector>

#include "gdsim/diffusion.hpp"
#include "gdsim/feature_matrix.hpp"

namespace gdsim {

// Monte-Carlo estimate of the end-of-walk distribution over objects.
struct WalkEstimate {
  std::size_t start = 0;
  int rounds = 0;
  std::uint64_t num_walks = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> hits;     // per object, sums to num_walks
  std::vector<double> estimate;        // hits / num_walks
  std::vector<double> standard_error;  // sqrt(p(1-p)/num_walks) at p = estimate
};

struct SimulateOptions {
  unsigned threads = 0;
};

// Simulates num_walks literal particle walks: each round steps object ->
// feature with probability w_is/p_i, then feature -> object with probability
// w_js/q_s. Per-walk generators are derived from (seed, walk index), so hit
// counts are bit-identical under any thread count.
WalkEstimate simulate(const FeatureMatrix& w, std::size_t start, int rounds,
                      std::uint64_t num_walks, std::uint64_t seed,
                      const SimulateOptions& opts = {});

// Distribution over features after the single object -> feature step,
// estimated the same way (the first half of a round).
std::vector<double> simulate_feature_step(const FeatureMatrix& w, std::size_t start,
                                          std::uint64_t num_walks, std::uint64_t seed,
                                          const SimulateOptions& opts = {});

struct ZComparison {
  double max_z = 0.0;
  std::size_t worst_index = 0;
  std::vector<double> z;  // per object
};

// Per-entry |estimate - exact| / stderr; entries with zero stderr must match
// exactly (z is 0 or infinity there).
ZComparison compare(const WalkEstimate& est, const SimilarityVector& exact);

}  // namespace gdsim
