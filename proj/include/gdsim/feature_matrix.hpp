#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gdsim {

// One weighted object-feature edge.
struct Triplet {
  std::size_t object = 0;
  std::size_t feature = 0;
  double weight = 0.0;
};

enum class StorageMode { kAuto, kSparse, kDense };

// Sparse non-negative object-feature weight matrix W with cached row sums p
// and column sums q. Immutable after construction.
//
// Validation on build: weights must be >= 0, coordinates in range and unique,
// every object row must have positive sum. All-zero feature columns are
// removed (their original indices are kept in dropped_features()), so q > 0
// holds entrywise afterwards.
//
// Storage is row-compressed; inputs denser than 50% are kept as a row-major
// dense array instead. Both layouts expose the same row iteration.
class FeatureMatrix {
 public:
  struct Entry {
    std::uint32_t feature;
    double weight;
  };

  // Empty placeholder; assign a built matrix before use.
  FeatureMatrix() = default;

  static FeatureMatrix build(std::vector<Triplet> entries, std::size_t n_objects,
                             std::size_t n_features,
                             StorageMode mode = StorageMode::kAuto);

  // Row-major dense values, same validation and column-dropping policy.
  static FeatureMatrix from_dense(const std::vector<double>& values,
                                  std::size_t n_objects, std::size_t n_features,
                                  StorageMode mode = StorageMode::kAuto);

  std::size_t objects() const { return n_; }
  std::size_t features() const { return m_; }
  std::size_t nnz() const { return nnz_; }
  bool is_dense() const { return dense_; }

  const std::vector<double>& row_sums() const { return p_; }
  const std::vector<double>& col_sums() const { return q_; }
  const std::vector<std::size_t>& dropped_features() const { return dropped_; }

  double min_row_sum() const;
  double max_row_sum() const;
  // min p / max p; above 2/3 the order-1 triangle inequality is guaranteed.
  double row_sum_ratio() const;

  // W with every row rescaled to sum 1; sparsity pattern unchanged.
  FeatureMatrix row_normalized() const;

  // Calls fn(feature, weight) for the stored entries of row i in ascending
  // feature order. Dense rows include explicit zeros.
  template <typename Fn>
  void for_each_in_row(std::size_t i, Fn&& fn) const {
    if (dense_) {
      const double* row = dense_values_.data() + i * m_;
      for (std::size_t s = 0; s < m_; ++s) fn(static_cast<std::uint32_t>(s), row[s]);
    } else {
      for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e)
        fn(entries_[e].feature, entries_[e].weight);
    }
  }

  std::span<const Entry> sparse_row(std::size_t i) const;
  std::span<const double> dense_row(std::size_t i) const;

  // Weight at (i, s); O(log deg) on sparse storage.
  double weight_at(std::size_t i, std::size_t s) const;

  // Max absolute difference between cached p/q and sums recomputed from the
  // stored entries.
  double recompute_defect() const;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t nnz_ = 0;
  bool dense_ = false;
  std::vector<std::size_t> row_ptr_;  // sparse layout
  std::vector<Entry> entries_;
  std::vector<double> dense_values_;  // dense layout, n_ * m_
  std::vector<double> p_;
  std::vector<double> q_;
  std::vector<std::size_t> dropped_;
};

// The pair of row-stochastic linear maps P^{-1}W (object -> feature) and
// Q^{-1}W^T (feature -> object) whose composition is the round transition
// matrix S = P^{-1}WQ^{-1}W^T. The constructor verifies both maps are
// row-stochastic within 1e-9.
class DiffusionOperator {
 public:
  explicit DiffusionOperator(FeatureMatrix w);

  std::size_t objects() const { return w_.objects(); }
  std::size_t features() const { return w_.features(); }
  const FeatureMatrix& matrix() const { return w_; }

  // Row-vector products with the two maps: out_s = sum_i in_i w_is / p_i and
  // out_j = sum_s in_s w_js / q_s. Both are O(nnz).
  void object_to_feature(std::span<const double> in, std::span<double> out) const;
  void feature_to_object(std::span<const double> in, std::span<double> out) const;

  // Column-vector products (the transposed pair), used for reversed rows:
  // out_s = (sum_j w_js in_j) / q_s and out_i = (sum_s w_is in_s) / p_i.
  void object_to_feature_adjoint(std::span<const double> in, std::span<double> out) const;
  void feature_to_object_adjoint(std::span<const double> in, std::span<double> out) const;

  // state <- state * S (one walk round). scratch must have length features().
  void push_round(std::span<double> state, std::span<double> scratch) const;
  // state <- S * state.
  void push_round_adjoint(std::span<double> state, std::span<double> scratch) const;

  // Max deviation of any row of either map from unit sum.
  double stochasticity_defect() const;

 private:
  FeatureMatrix w_;
};

}  // namespace gdsim
