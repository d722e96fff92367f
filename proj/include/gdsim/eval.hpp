#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gdsim/baselines.hpp"
#include "gdsim/dataset.hpp"
#include "gdsim/diffusion.hpp"

namespace gdsim {

// Class labels mapped to dense ids (sorted label order) with counts.
struct LabelIndex {
  std::vector<std::string> names;
  std::vector<std::size_t> counts;
  std::vector<std::uint32_t> ids;  // per object

  std::size_t n() const { return ids.size(); }
  // The measure-independent value of E(1): sum_c (c/n)(1 - c/n).
  double class_mix() const;
};

LabelIndex index_labels(const std::vector<std::string>& labels);

// Sampled error curve f -> E(f) for one measure on one dataset.
struct ErrorCurve {
  std::string measure;
  std::vector<double> grid;    // f values in (0, 1]
  std::vector<double> values;  // E(f) per grid point
  std::size_t n = 0;
  std::vector<std::pair<std::string, std::size_t>> class_counts;

  // E at a given f; the f must be one of the grid points.
  double at(double f) const;
};

// A measure ready for ranking: produces the full score vector for one query.
struct ScoredMeasure {
  std::string name;
  Orientation orientation = Orientation::kHigherIsSimilar;
  std::function<std::vector<double>(std::size_t query)> scores;
};

// f grid 1/points, 2/points, ..., 1.
std::vector<double> default_grid(std::size_t points = 100);

// Neighbor set size ceil(n*f), with a 1e-9 slack so that grid fractions like
// 0.07 * 100 do not round up past the intended integer.
std::size_t neighbor_count(std::size_t n, double f);

// Sorts object indices by score (per orientation), ties by ascending index.
// Throws on NaN scores.
std::vector<std::uint32_t> rank_neighbors(std::span<const double> scores,
                                          Orientation orientation);

// e(x, f): fraction of the first ceil(n*f) ranked objects (query included in
// the candidate pool) whose label differs from x's.
double point_error(std::span<const std::uint32_t> ranking,
                   std::span<const std::uint32_t> label_ids, std::size_t x, double f);

struct CurveOptions {
  std::vector<double> grid;  // empty = default_grid()
  unsigned threads = 0;
};

ErrorCurve error_curve(const ScoredMeasure& measure, const LabelIndex& labels,
                       const CurveOptions& opts = {});

// Best achievable curve: e(x, f) = max(0, (t - count_y(x)) / t).
ErrorCurve optimal_curve(const LabelIndex& labels, std::vector<double> grid = {});

// One curve per order k = 1..k_max for the given diffusion variant kind.
std::vector<ErrorCurve> sweep_orders(const FeatureMatrix& w, VariantKind kind, int k_max,
                                     const LabelIndex& labels, const CurveOptions& opts = {});

// Measure adapters for the harness. The categorical and vector adapters hold
// references; the view/stats/matrix must outlive the returned measure.
ScoredMeasure make_categorical_measure(CategoricalMeasure m, const CategoricalView& view,
                                       const FrequencyStats& stats);
ScoredMeasure make_vector_measure(VectorMeasure m, const FeatureMatrix& w);
ScoredMeasure make_diffusion_measure(std::shared_ptr<const DiffusionOperator> op,
                                     Variant variant);

// Registry of measure names accepted on the command line: the categorical
// and vector measures above plus "gd" (order from --k) and "gd1".."gd9".
struct MeasureId {
  enum class Class { kCategorical, kVector, kDiffusion };
  Class cls = Class::kCategorical;
  CategoricalMeasure categorical = CategoricalMeasure::kOverlap;
  VectorMeasure vector = VectorMeasure::kInner;
  int order = 0;  // diffusion only; 0 means take the order from --k
  std::string name;
};

MeasureId parse_measure(const std::string& name);
std::vector<std::string> list_measure_names();

}  // namespace gdsim
