#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gdsim/feature_matrix.hpp"

namespace gdsim {

enum class VariantKind { kForward, kReversed, kNormalized };

const char* to_string(VariantKind kind);
VariantKind parse_variant_kind(const std::string& name);

// A diffusion similarity variant: kind plus walk order k >= 1 (rounds).
struct Variant {
  VariantKind kind = VariantKind::kForward;
  int order = 1;

  std::string label() const;
};

// One query's similarity scores against every object.
struct SimilarityVector {
  std::size_t query = 0;
  Variant variant;
  std::vector<double> scores;
};

// Row-major square matrix of pairwise scores.
struct ScoreMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * n, n}; }
};

// Row i of S^k = e_i^T S^k, by 2k alternating map applications; O(k nnz).
// The scores form a probability vector (sum 1 within 1e-9).
SimilarityVector forward_row(const DiffusionOperator& op, std::size_t i, int k);

// Column i of S^k, i.e. r^(k)(i, j) = g^(k)(j, i), by k adjoint rounds; O(k nnz).
SimilarityVector reversed_row(const DiffusionOperator& op, std::size_t i, int k);

// Forward row of the row-normalized matrix; symmetric across queries.
// Convenience wrapper that normalizes per call; batch callers should build
// DiffusionOperator(w.row_normalized()) once and use forward_row.
SimilarityVector normalized_row(const FeatureMatrix& w, std::size_t i, int k);

struct MatrixOptions {
  std::size_t cap = 20000;   // refuse to materialize beyond cap x cap
  unsigned threads = 0;      // 0 = default_thread_count()
  std::size_t dense_cutoff = 512;  // at or below: dense powering instead of row pushes
};

// All pairwise similarities for the variant. Row-parallel; reversed variants
// are the transpose of the forward matrix of the same order.
ScoreMatrix similarity_matrix(const FeatureMatrix& w, Variant variant,
                              const MatrixOptions& opts = {});

// Elementwise distance 1 - s.
std::vector<double> to_distance(std::vector<double> scores);
ScoreMatrix to_distance(ScoreMatrix scores);
SimilarityVector to_distance(SimilarityVector s);

// Single pair score. Order-1 scores use the explicit formula
// g^(1)(i,j) = (1/p_i) sum_s w_is w_js / q_s; higher orders extract the pair
// from the corresponding row computation.
double pair_score(const FeatureMatrix& w, Variant variant, std::size_t i, std::size_t j);

}  // namespace gdsim
