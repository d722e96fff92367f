#include "gdsim/feature_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gdsim {

namespace {

std::string coord(std::size_t i, std::size_t s) {
  return "(" + std::to_string(i) + ", " + std::to_string(s) + ")";
}

}  // namespace

FeatureMatrix FeatureMatrix::build(std::vector<Triplet> entries, std::size_t n_objects,
                                   std::size_t n_features, StorageMode mode) {
  if (n_objects == 0 || n_features == 0)
    throw std::invalid_argument("feature matrix must have at least one object and one feature");

  for (const Triplet& t : entries) {
    if (t.object >= n_objects || t.feature >= n_features)
      throw std::invalid_argument("entry " + coord(t.object, t.feature) + " out of range for " +
                                  std::to_string(n_objects) + "x" + std::to_string(n_features));
    if (!(t.weight >= 0.0))
      throw std::invalid_argument("negative or non-finite weight at " + coord(t.object, t.feature));
  }

  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.object != b.object ? a.object < b.object : a.feature < b.feature;
  });
  for (std::size_t e = 1; e < entries.size(); ++e)
    if (entries[e].object == entries[e - 1].object && entries[e].feature == entries[e - 1].feature)
      throw std::invalid_argument("duplicate coordinate " +
                                  coord(entries[e].object, entries[e].feature));

  // Explicit zeros carry no edge; drop them after validation.
  entries.erase(std::remove_if(entries.begin(), entries.end(),
                               [](const Triplet& t) { return t.weight == 0.0; }),
                entries.end());

  std::vector<double> col_sum(n_features, 0.0);
  for (const Triplet& t : entries) col_sum[t.feature] += t.weight;

  // Remove absent features, keep a record of the original column indices.
  std::vector<std::size_t> remap(n_features, 0);
  std::vector<std::size_t> dropped;
  std::size_t kept = 0;
  for (std::size_t s = 0; s < n_features; ++s) {
    if (col_sum[s] > 0.0) {
      remap[s] = kept++;
    } else {
      dropped.push_back(s);
    }
  }
  if (kept == 0) throw std::invalid_argument("matrix has no nonzero entries");

  FeatureMatrix w;
  w.n_ = n_objects;
  w.m_ = kept;
  w.nnz_ = entries.size();
  w.dropped_ = std::move(dropped);
  w.p_.assign(n_objects, 0.0);
  w.q_.assign(kept, 0.0);

  const double density =
      static_cast<double>(entries.size()) / (static_cast<double>(n_objects) * kept);
  w.dense_ = mode == StorageMode::kDense || (mode == StorageMode::kAuto && density > 0.5);

  if (w.dense_) {
    w.dense_values_.assign(n_objects * kept, 0.0);
    for (const Triplet& t : entries)
      w.dense_values_[t.object * kept + remap[t.feature]] = t.weight;
    // Row-major sums in ascending feature order, same as the sparse path.
    for (std::size_t i = 0; i < n_objects; ++i)
      for (std::size_t s = 0; s < kept; ++s) {
        const double v = w.dense_values_[i * kept + s];
        w.p_[i] += v;
        w.q_[s] += v;
      }
  } else {
    w.row_ptr_.assign(n_objects + 1, 0);
    w.entries_.reserve(entries.size());
    for (const Triplet& t : entries) w.row_ptr_[t.object + 1]++;
    for (std::size_t i = 0; i < n_objects; ++i) w.row_ptr_[i + 1] += w.row_ptr_[i];
    for (const Triplet& t : entries)
      w.entries_.push_back({static_cast<std::uint32_t>(remap[t.feature]), t.weight});
    for (std::size_t i = 0; i < n_objects; ++i)
      for (std::size_t e = w.row_ptr_[i]; e < w.row_ptr_[i + 1]; ++e) {
        w.p_[i] += w.entries_[e].weight;
        w.q_[w.entries_[e].feature] += w.entries_[e].weight;
      }
  }

  for (std::size_t i = 0; i < n_objects; ++i)
    if (!(w.p_[i] > 0.0))
      throw std::invalid_argument("object " + std::to_string(i) +
                                  " has no features (null objects are rejected)");
  return w;
}

FeatureMatrix FeatureMatrix::from_dense(const std::vector<double>& values, std::size_t n_objects,
                                        std::size_t n_features, StorageMode mode) {
  if (values.size() != n_objects * n_features)
    throw std::invalid_argument("dense value count does not match matrix shape");
  std::vector<Triplet> entries;
  entries.reserve(values.size());
  for (std::size_t i = 0; i < n_objects; ++i)
    for (std::size_t s = 0; s < n_features; ++s) {
      const double v = values[i * n_features + s];
      if (!(v >= 0.0))
        throw std::invalid_argument("negative or non-finite weight at " + coord(i, s));
      if (v != 0.0) entries.push_back({i, s, v});
    }
  return build(std::move(entries), n_objects, n_features, mode);
}

std::span<const FeatureMatrix::Entry> FeatureMatrix::sparse_row(std::size_t i) const {
  return {entries_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
}

std::span<const double> FeatureMatrix::dense_row(std::size_t i) const {
  return {dense_values_.data() + i * m_, m_};
}

double FeatureMatrix::weight_at(std::size_t i, std::size_t s) const {
  if (dense_) return dense_values_[i * m_ + s];
  const auto row = sparse_row(i);
  const auto it = std::lower_bound(row.begin(), row.end(), s, [](const Entry& e, std::size_t f) {
    return e.feature < f;
  });
  return (it != row.end() && it->feature == s) ? it->weight : 0.0;
}

double FeatureMatrix::min_row_sum() const {
  return *std::min_element(p_.begin(), p_.end());
}

double FeatureMatrix::max_row_sum() const {
  return *std::max_element(p_.begin(), p_.end());
}

double FeatureMatrix::row_sum_ratio() const { return min_row_sum() / max_row_sum(); }

FeatureMatrix FeatureMatrix::row_normalized() const {
  FeatureMatrix w = *this;
  if (dense_) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t s = 0; s < m_; ++s) w.dense_values_[i * m_ + s] /= p_[i];
  } else {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e)
        w.entries_[e].weight /= p_[i];
  }
  // Keep the cached sums exactly consistent with the stored entries.
  std::fill(w.p_.begin(), w.p_.end(), 0.0);
  std::fill(w.q_.begin(), w.q_.end(), 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    w.for_each_in_row(i, [&](std::uint32_t s, double v) {
      w.p_[i] += v;
      w.q_[s] += v;
    });
  return w;
}

double FeatureMatrix::recompute_defect() const {
  std::vector<double> p(n_, 0.0), q(m_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for_each_in_row(i, [&](std::uint32_t s, double v) {
      p[i] += v;
      q[s] += v;
    });
  double defect = 0.0;
  for (std::size_t i = 0; i < n_; ++i) defect = std::max(defect, std::abs(p[i] - p_[i]));
  for (std::size_t s = 0; s < m_; ++s) defect = std::max(defect, std::abs(q[s] - q_[s]));
  return defect;
}

DiffusionOperator::DiffusionOperator(FeatureMatrix w) : w_(std::move(w)) {
  if (stochasticity_defect() > 1e-9)
    throw std::invalid_argument("diffusion maps deviate from row-stochastic beyond 1e-9");
}

void DiffusionOperator::object_to_feature(std::span<const double> in,
                                          std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const auto& p = w_.row_sums();
  for (std::size_t i = 0; i < w_.objects(); ++i) {
    if (in[i] == 0.0) continue;
    const double a = in[i] / p[i];
    w_.for_each_in_row(i, [&](std::uint32_t s, double v) { out[s] += a * v; });
  }
}

void DiffusionOperator::feature_to_object(std::span<const double> in,
                                          std::span<double> out) const {
  const auto& q = w_.col_sums();
  for (std::size_t j = 0; j < w_.objects(); ++j) {
    double acc = 0.0;
    w_.for_each_in_row(j, [&](std::uint32_t s, double v) { acc += in[s] * v / q[s]; });
    out[j] = acc;
  }
}

void DiffusionOperator::object_to_feature_adjoint(std::span<const double> in,
                                                  std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const auto& q = w_.col_sums();
  for (std::size_t j = 0; j < w_.objects(); ++j) {
    if (in[j] == 0.0) continue;
    const double a = in[j];
    w_.for_each_in_row(j, [&](std::uint32_t s, double v) { out[s] += a * v; });
  }
  for (std::size_t s = 0; s < w_.features(); ++s) out[s] /= q[s];
}

void DiffusionOperator::feature_to_object_adjoint(std::span<const double> in,
                                                  std::span<double> out) const {
  const auto& p = w_.row_sums();
  for (std::size_t i = 0; i < w_.objects(); ++i) {
    double acc = 0.0;
    w_.for_each_in_row(i, [&](std::uint32_t s, double v) { acc += v * in[s]; });
    out[i] = acc / p[i];
  }
}

void DiffusionOperator::push_round(std::span<double> state, std::span<double> scratch) const {
  object_to_feature(state, scratch);
  feature_to_object(scratch, state);
}

void DiffusionOperator::push_round_adjoint(std::span<double> state,
                                           std::span<double> scratch) const {
  object_to_feature_adjoint(state, scratch);
  feature_to_object_adjoint(scratch, state);
}

double DiffusionOperator::stochasticity_defect() const {
  const auto& p = w_.row_sums();
  const auto& q = w_.col_sums();
  std::vector<double> row_of_forward(w_.objects(), 0.0);
  std::vector<double> row_of_backward(w_.features(), 0.0);
  for (std::size_t i = 0; i < w_.objects(); ++i)
    w_.for_each_in_row(i, [&](std::uint32_t s, double v) {
      row_of_forward[i] += v / p[i];
      row_of_backward[s] += v / q[s];
    });
  double defect = 0.0;
  for (double r : row_of_forward) defect = std::max(defect, std::abs(r - 1.0));
  for (double r : row_of_backward) defect = std::max(defect, std::abs(r - 1.0));
  return defect;
}

}  // namespace gdsim
