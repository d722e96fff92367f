#include "gdsim/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace gdsim {

FrequencyStats compute_stats(const CategoryDictionary& dict, std::size_t n) {
  if (dict.columns.empty())
    throw std::invalid_argument("dataset has no categorical columns to compute stats for");
  FrequencyStats stats;
  stats.n = n;
  const double nn1 = static_cast<double>(n) * (static_cast<double>(n) - 1.0);
  for (const auto& col : dict.columns) {
    FrequencyStats::Column c;
    c.name = col.name;
    c.n_categories = col.values.size();
    for (std::size_t v = 0; v < col.counts.size(); ++v) {
      const double f = static_cast<double>(col.counts[v]);
      c.count.push_back(f);
      c.log_count.push_back(std::log(f));
      c.p_hat.push_back(f / static_cast<double>(n));
      c.log_p_hat.push_back(std::log(f / static_cast<double>(n)));
      c.p_hat2.push_back(f * (f - 1.0) / nn1);
    }
    stats.columns.push_back(std::move(c));
  }
  return stats;
}

FrequencyStats compute_stats(const LabeledDataset& dataset) {
  return compute_stats(build_dictionary(dataset), dataset.n());
}

double categorical_similarity(CategoricalMeasure measure, std::span<const std::uint32_t> x,
                              std::span<const std::uint32_t> y, const FrequencyStats& stats) {
  if (x.size() != stats.columns.size() || y.size() != stats.columns.size())
    throw std::invalid_argument("row width does not match the attribute statistics");
  const std::size_t c = stats.columns.size();
  const double n = static_cast<double>(stats.n);
  const double log_n = std::log(n);

  if (measure == CategoricalMeasure::kLin) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
      const auto& col = stats.columns[k];
      num += x[k] == y[k] ? 2.0 * col.log_p_hat[x[k]]
                          : 2.0 * std::log(col.p_hat[x[k]] + col.p_hat[y[k]]);
      den += col.log_p_hat[x[k]] + col.log_p_hat[y[k]];
    }
    // den is 0 only when every involved category has probability 1, i.e. the
    // rows agree on every attribute and match everything else too.
    return den == 0.0 ? 1.0 : num / den;
  }

  double total = 0.0;
  for (std::size_t k = 0; k < c; ++k) {
    const auto& col = stats.columns[k];
    const bool match = x[k] == y[k];
    switch (measure) {
      case CategoricalMeasure::kOverlap:
        total += match ? 1.0 : 0.0;
        break;
      case CategoricalMeasure::kEskin: {
        const double nk = static_cast<double>(col.n_categories);
        total += match ? 1.0 : nk * nk / (nk * nk + 2.0);
        break;
      }
      case CategoricalMeasure::kIof:
        total += match ? 1.0 : 1.0 / (1.0 + col.log_count[x[k]] * col.log_count[y[k]]);
        break;
      case CategoricalMeasure::kOf:
        total += match ? 1.0
                       : 1.0 / (1.0 + (log_n - col.log_count[x[k]]) *
                                          (log_n - col.log_count[y[k]]));
        break;
      case CategoricalMeasure::kGoodall3:
        total += match ? 1.0 - col.p_hat2[x[k]] : 0.0;
        break;
      case CategoricalMeasure::kGoodall4:
        total += match ? col.p_hat2[x[k]] : 0.0;
        break;
      case CategoricalMeasure::kLin:
        break;  // handled above
    }
  }
  return total / static_cast<double>(c);
}

double vector_similarity(VectorMeasure measure, std::span<const double> x,
                         std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("vector lengths differ: " + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()));
  switch (measure) {
    case VectorMeasure::kInner: {
      double acc = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
      return acc;
    }
    case VectorMeasure::kEuclidean: {
      double acc = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - y[i]) * (x[i] - y[i]);
      return std::sqrt(acc);
    }
    case VectorMeasure::kManhattan: {
      double acc = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) acc += std::abs(x[i] - y[i]);
      return acc;
    }
    case VectorMeasure::kCosine: {
      double dot = 0.0, nx = 0.0, ny = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        dot += x[i] * y[i];
        nx += x[i] * x[i];
        ny += y[i] * y[i];
      }
      if (nx == 0.0 || ny == 0.0) return 0.0;
      return dot / (std::sqrt(nx) * std::sqrt(ny));
    }
  }
  throw std::logic_error("unreachable");
}

const char* to_string(CategoricalMeasure m) {
  switch (m) {
    case CategoricalMeasure::kOverlap: return "overlap";
    case CategoricalMeasure::kEskin: return "eskin";
    case CategoricalMeasure::kIof: return "iof";
    case CategoricalMeasure::kOf: return "of";
    case CategoricalMeasure::kLin: return "lin";
    case CategoricalMeasure::kGoodall3: return "goodall3";
    case CategoricalMeasure::kGoodall4: return "goodall4";
  }
  return "?";
}

const char* to_string(VectorMeasure m) {
  switch (m) {
    case VectorMeasure::kInner: return "inner";
    case VectorMeasure::kEuclidean: return "l2";
    case VectorMeasure::kManhattan: return "manhattan";
    case VectorMeasure::kCosine: return "cosine";
  }
  return "?";
}

Orientation orientation_of(VectorMeasure m) {
  return (m == VectorMeasure::kEuclidean || m == VectorMeasure::kManhattan)
             ? Orientation::kLowerIsSimilar
             : Orientation::kHigherIsSimilar;
}

}  // namespace gdsim
