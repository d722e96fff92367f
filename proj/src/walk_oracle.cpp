#include "gdsim/walk_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "gdsim/parallel.hpp"
#include "gdsim/rng.hpp"

namespace gdsim {

namespace {

// Cumulative-weight tables for both walk directions. Transition sampling is
// a uniform draw against the node's prefix sums plus a binary search,
// O(log deg) per step.
struct WalkTables {
  // objects: prefix sums over row entries; features of row i listed in order
  std::vector<std::size_t> obj_ptr;
  std::vector<double> obj_cum;
  std::vector<std::uint32_t> obj_target;  // feature per slot
  // features: prefix sums over incident objects
  std::vector<std::size_t> feat_ptr;
  std::vector<double> feat_cum;
  std::vector<std::uint32_t> feat_target;  // object per slot

  explicit WalkTables(const FeatureMatrix& w) {
    const std::size_t n = w.objects(), m = w.features();
    obj_ptr.assign(n + 1, 0);
    feat_ptr.assign(m + 1, 0);
    for (std::size_t i = 0; i < n; ++i)
      w.for_each_in_row(i, [&](std::uint32_t s, double v) {
        if (v == 0.0) return;
        obj_ptr[i + 1]++;
        feat_ptr[s + 1]++;
      });
    for (std::size_t i = 0; i < n; ++i) obj_ptr[i + 1] += obj_ptr[i];
    for (std::size_t s = 0; s < m; ++s) feat_ptr[s + 1] += feat_ptr[s];
    obj_cum.resize(obj_ptr[n]);
    obj_target.resize(obj_ptr[n]);
    feat_cum.resize(feat_ptr[m]);
    feat_target.resize(feat_ptr[m]);
    std::vector<std::size_t> obj_fill = obj_ptr, feat_fill = feat_ptr;
    std::vector<double> obj_run(n, 0.0), feat_run(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      w.for_each_in_row(i, [&](std::uint32_t s, double v) {
        if (v == 0.0) return;
        obj_run[i] += v;
        obj_cum[obj_fill[i]] = obj_run[i];
        obj_target[obj_fill[i]] = s;
        obj_fill[i]++;
        feat_run[s] += v;
        feat_cum[feat_fill[s]] = feat_run[s];
        feat_target[feat_fill[s]] = static_cast<std::uint32_t>(i);
        feat_fill[s]++;
      });
  }

  static std::uint32_t pick(const double* cum, const std::uint32_t* target, std::size_t count,
                            double total, double u) {
    const double x = u * total;
    const double* it = std::upper_bound(cum, cum + count, x);
    if (it == cum + count) --it;  // u*total can round up to the full sum
    return target[it - cum];
  }

  std::uint32_t step_to_feature(std::size_t i, double total, double u) const {
    return pick(obj_cum.data() + obj_ptr[i], obj_target.data() + obj_ptr[i],
                obj_ptr[i + 1] - obj_ptr[i], total, u);
  }

  std::uint32_t step_to_object(std::size_t s, double total, double u) const {
    return pick(feat_cum.data() + feat_ptr[s], feat_target.data() + feat_ptr[s],
                feat_ptr[s + 1] - feat_ptr[s], total, u);
  }
};

}  // namespace

WalkEstimate simulate(const FeatureMatrix& w, std::size_t start, int rounds,
                      std::uint64_t num_walks, std::uint64_t seed,
                      const SimulateOptions& opts) {
  if (start >= w.objects()) throw std::out_of_range("start index out of range");
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (num_walks < 1) throw std::invalid_argument("num_walks must be >= 1");

  const WalkTables tables(w);
  const auto& p = w.row_sums();
  const auto& q = w.col_sums();
  const unsigned threads = opts.threads ? opts.threads : default_thread_count();

  WalkEstimate est;
  est.start = start;
  est.rounds = rounds;
  est.num_walks = num_walks;
  est.seed = seed;
  est.hits.assign(w.objects(), 0);

  std::mutex merge_mutex;
  parallel_chunks(0, num_walks, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::uint64_t> local(w.objects(), 0);
    for (std::size_t walk = lo; walk < hi; ++walk) {
      SplitMix64 rng(derive_seed(seed, walk));
      std::size_t pos = start;
      for (int r = 0; r < rounds; ++r) {
        const std::uint32_t s = tables.step_to_feature(pos, p[pos], rng.uniform());
        pos = tables.step_to_object(s, q[s], rng.uniform());
      }
      local[pos]++;
    }
    // Integer merge commutes, so the merge order cannot change the counts.
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (std::size_t j = 0; j < local.size(); ++j) est.hits[j] += local[j];
  });

  est.estimate.resize(w.objects());
  est.standard_error.resize(w.objects());
  const double nw = static_cast<double>(num_walks);
  for (std::size_t j = 0; j < w.objects(); ++j) {
    const double ph = static_cast<double>(est.hits[j]) / nw;
    est.estimate[j] = ph;
    est.standard_error[j] = std::sqrt(ph * (1.0 - ph) / nw);
  }
  return est;
}

std::vector<double> simulate_feature_step(const FeatureMatrix& w, std::size_t start,
                                          std::uint64_t num_walks, std::uint64_t seed,
                                          const SimulateOptions& opts) {
  if (start >= w.objects()) throw std::out_of_range("start index out of range");
  const WalkTables tables(w);
  const auto& p = w.row_sums();
  const unsigned threads = opts.threads ? opts.threads : default_thread_count();

  std::vector<std::uint64_t> hits(w.features(), 0);
  std::mutex merge_mutex;
  parallel_chunks(0, num_walks, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::uint64_t> local(w.features(), 0);
    for (std::size_t walk = lo; walk < hi; ++walk) {
      SplitMix64 rng(derive_seed(seed, walk));
      local[tables.step_to_feature(start, p[start], rng.uniform())]++;
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (std::size_t s = 0; s < local.size(); ++s) hits[s] += local[s];
  });

  std::vector<double> estimate(w.features());
  for (std::size_t s = 0; s < w.features(); ++s)
    estimate[s] = static_cast<double>(hits[s]) / static_cast<double>(num_walks);
  return estimate;
}

ZComparison compare(const WalkEstimate& est, const SimilarityVector& exact) {
  if (est.estimate.size() != exact.scores.size())
    throw std::invalid_argument("estimate and exact vector shapes differ");
  if (est.start != exact.query)
    throw std::invalid_argument("estimate and exact vector have different start objects");

  ZComparison cmp;
  cmp.z.resize(est.estimate.size());
  for (std::size_t j = 0; j < est.estimate.size(); ++j) {
    const double gap = std::abs(est.estimate[j] - exact.scores[j]);
    if (est.standard_error[j] == 0.0) {
      cmp.z[j] = gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
      cmp.z[j] = gap / est.standard_error[j];
    }
    if (cmp.z[j] > cmp.max_z) {
      cmp.max_z = cmp.z[j];
      cmp.worst_index = j;
    }
  }
  return cmp;
}

}  // namespace gdsim
