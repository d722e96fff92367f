#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gdsim/dataset.hpp"

namespace gdsim {

enum class CategoricalMeasure { kOverlap, kEskin, kIof, kOf, kLin, kGoodall3, kGoodall4 };
enum class VectorMeasure { kInner, kEuclidean, kManhattan, kCosine };

// Ranking direction of a measure's raw score.
enum class Orientation { kHigherIsSimilar, kLowerIsSimilar };

// Per-attribute category statistics consumed by the categorical measures:
// category count n_k, per-value count f_k(v), sample probability
// p(v) = f/N, and the pair probability p2(v) = f(f-1)/(N(N-1)).
struct FrequencyStats {
  struct Column {
    std::string name;
    std::size_t n_categories = 0;
    std::vector<double> count;      // f_k(v), indexed by dictionary code
    std::vector<double> log_count;  // ln f_k(v)
    std::vector<double> p_hat;      // f/N
    std::vector<double> log_p_hat;  // ln(f/N)
    std::vector<double> p_hat2;     // f(f-1) / (N(N-1))
  };
  std::size_t n = 0;  // dataset size N
  std::vector<Column> columns;
};

// Exact counts for every categorical attribute; errors when the dataset has
// no categorical columns.
FrequencyStats compute_stats(const LabeledDataset& dataset);
FrequencyStats compute_stats(const CategoryDictionary& dict, std::size_t n);

// Per-attribute score combined over attributes (unweighted mean, except Lin
// which uses its log-probability weights). x and y are dictionary-code rows
// from the same CategoricalView. Formulas follow the standard per-attribute
// conventions:
//   overlap   match 1, mismatch 0
//   Eskin     match 1, mismatch n_k^2 / (n_k^2 + 2)
//   IOF       match 1, mismatch 1 / (1 + ln f(x) ln f(y))
//   OF        match 1, mismatch 1 / (1 + ln(N/f(x)) ln(N/f(y)))
//   Lin       match 2 ln p(x), mismatch 2 ln(p(x)+p(y)),
//             weighted by 1 / sum_k (ln p(x_k) + ln p(y_k))
//   Goodall3  match 1 - p2(x), mismatch 0
//   Goodall4  match p2(x), mismatch 0
double categorical_similarity(CategoricalMeasure measure, std::span<const std::uint32_t> x,
                              std::span<const std::uint32_t> y, const FrequencyStats& stats);

// inner = sum x_i y_i; euclidean / manhattan are distances; cosine is 0 when
// either norm is 0.
double vector_similarity(VectorMeasure measure, std::span<const double> x,
                         std::span<const double> y);

const char* to_string(CategoricalMeasure m);
const char* to_string(VectorMeasure m);
Orientation orientation_of(VectorMeasure m);

}  // namespace gdsim
