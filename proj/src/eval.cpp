#include "gdsim/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "gdsim/parallel.hpp"

namespace gdsim {

double LabelIndex::class_mix() const {
  const double nn = static_cast<double>(n());
  double mix = 0.0;
  for (std::size_t c : counts) {
    const double frac = static_cast<double>(c) / nn;
    mix += frac * (1.0 - frac);
  }
  return mix;
}

LabelIndex index_labels(const std::vector<std::string>& labels) {
  LabelIndex idx;
  std::map<std::string, std::uint32_t> by_name;
  for (const auto& label : labels) by_name.emplace(label, 0);
  std::uint32_t next = 0;
  for (auto& [name, id] : by_name) {
    id = next++;
    idx.names.push_back(name);
  }
  idx.counts.assign(idx.names.size(), 0);
  idx.ids.reserve(labels.size());
  for (const auto& label : labels) {
    const std::uint32_t id = by_name[label];
    idx.ids.push_back(id);
    idx.counts[id]++;
  }
  return idx;
}

double ErrorCurve::at(double f) const {
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(grid[i] - f) < 1e-12) return values[i];
  throw std::invalid_argument("f = " + std::to_string(f) + " is not a grid point");
}

std::vector<double> default_grid(std::size_t points) {
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = static_cast<double>(i + 1) / static_cast<double>(points);
  return grid;
}

std::size_t neighbor_count(std::size_t n, double f) {
  if (!(f > 0.0) || f > 1.0)
    throw std::invalid_argument("f must lie in (0, 1], got " + std::to_string(f));
  const double t = std::ceil(static_cast<double>(n) * f - 1e-9);
  return std::min<std::size_t>(n, std::max<std::size_t>(1, static_cast<std::size_t>(t)));
}

std::vector<std::uint32_t> rank_neighbors(std::span<const double> scores,
                                          Orientation orientation) {
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (std::isnan(scores[i]))
      throw std::invalid_argument("NaN score at index " + std::to_string(i));
  std::vector<std::uint32_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
  if (orientation == Orientation::kHigherIsSimilar) {
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
    });
  } else {
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return scores[a] != scores[b] ? scores[a] < scores[b] : a < b;
    });
  }
  return order;
}

double point_error(std::span<const std::uint32_t> ranking,
                   std::span<const std::uint32_t> label_ids, std::size_t x, double f) {
  const std::size_t t = neighbor_count(ranking.size(), f);
  std::size_t diff = 0;
  const std::uint32_t mine = label_ids[x];
  for (std::size_t r = 0; r < t; ++r)
    if (label_ids[ranking[r]] != mine) ++diff;
  return static_cast<double>(diff) / static_cast<double>(t);
}

namespace {

ErrorCurve curve_shell(std::string name, const LabelIndex& labels, std::vector<double> grid) {
  ErrorCurve curve;
  curve.measure = std::move(name);
  curve.grid = grid.empty() ? default_grid() : std::move(grid);
  curve.values.assign(curve.grid.size(), 0.0);
  curve.n = labels.n();
  for (std::size_t c = 0; c < labels.names.size(); ++c)
    curve.class_counts.emplace_back(labels.names[c], labels.counts[c]);
  return curve;
}

}  // namespace

ErrorCurve error_curve(const ScoredMeasure& measure, const LabelIndex& labels,
                       const CurveOptions& opts) {
  ErrorCurve curve = curve_shell(measure.name, labels, opts.grid);
  const std::size_t n = labels.n();
  const std::size_t g = curve.grid.size();
  std::vector<std::size_t> t_of(g);
  for (std::size_t j = 0; j < g; ++j) t_of[j] = neighbor_count(n, curve.grid[j]);

  // Per-query errors land in their own slots; the final mean is reduced in
  // query order, so results do not depend on the thread count.
  std::vector<double> per_query(n * g);
  const unsigned threads = opts.threads ? opts.threads : default_thread_count();
  parallel_chunks(0, n, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> diff_prefix(n + 1);
    for (std::size_t x = lo; x < hi; ++x) {
      const std::vector<double> scores = measure.scores(x);
      if (scores.size() != n) throw std::logic_error("score vector length mismatch");
      const auto ranking = rank_neighbors(scores, measure.orientation);
      diff_prefix[0] = 0;
      const std::uint32_t mine = labels.ids[x];
      for (std::size_t r = 0; r < n; ++r)
        diff_prefix[r + 1] = diff_prefix[r] + (labels.ids[ranking[r]] != mine ? 1 : 0);
      for (std::size_t j = 0; j < g; ++j)
        per_query[x * g + j] =
            static_cast<double>(diff_prefix[t_of[j]]) / static_cast<double>(t_of[j]);
    }
  });
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t j = 0; j < g; ++j) curve.values[j] += per_query[x * g + j];
  for (double& v : curve.values) v /= static_cast<double>(n);
  return curve;
}

ErrorCurve optimal_curve(const LabelIndex& labels, std::vector<double> grid) {
  ErrorCurve curve = curve_shell("optimal", labels, std::move(grid));
  const double n = static_cast<double>(labels.n());
  for (std::size_t j = 0; j < curve.grid.size(); ++j) {
    const double t = static_cast<double>(neighbor_count(labels.n(), curve.grid[j]));
    double total = 0.0;
    for (std::size_t c = 0; c < labels.counts.size(); ++c) {
      const double cnt = static_cast<double>(labels.counts[c]);
      total += cnt * std::max(0.0, (t - cnt) / t);
    }
    curve.values[j] = total / n;
  }
  return curve;
}

std::vector<ErrorCurve> sweep_orders(const FeatureMatrix& w, VariantKind kind, int k_max,
                                     const LabelIndex& labels, const CurveOptions& opts) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  const auto op = std::make_shared<const DiffusionOperator>(
      kind == VariantKind::kNormalized ? w.row_normalized() : FeatureMatrix(w));
  std::vector<ErrorCurve> curves;
  curves.reserve(k_max);
  for (int k = 1; k <= k_max; ++k) {
    ScoredMeasure m = make_diffusion_measure(op, {kind, k});
    curves.push_back(error_curve(m, labels, opts));
  }
  return curves;
}

ScoredMeasure make_categorical_measure(CategoricalMeasure m, const CategoricalView& view,
                                       const FrequencyStats& stats) {
  ScoredMeasure out;
  out.name = to_string(m);
  out.orientation = Orientation::kHigherIsSimilar;
  out.scores = [m, &view, &stats](std::size_t query) {
    std::vector<double> scores(view.n);
    const auto x = view.row(query);
    for (std::size_t j = 0; j < view.n; ++j)
      scores[j] = categorical_similarity(m, x, view.row(j), stats);
    return scores;
  };
  return out;
}

ScoredMeasure make_vector_measure(VectorMeasure m, const FeatureMatrix& w) {
  ScoredMeasure out;
  out.name = to_string(m);
  out.orientation = orientation_of(m);
  out.scores = [m, &w](std::size_t query) {
    const std::size_t n = w.objects();
    std::vector<double> x(w.features(), 0.0);
    w.for_each_in_row(query, [&](std::uint32_t s, double v) { x[s] = v; });
    std::vector<double> scores(n);
    std::vector<double> y(w.features());
    for (std::size_t j = 0; j < n; ++j) {
      std::fill(y.begin(), y.end(), 0.0);
      w.for_each_in_row(j, [&](std::uint32_t s, double v) { y[s] = v; });
      scores[j] = vector_similarity(m, x, y);
    }
    return scores;
  };
  return out;
}

MeasureId parse_measure(const std::string& name) {
  MeasureId id;
  id.name = name;
  const auto cat = [&](CategoricalMeasure m) {
    id.cls = MeasureId::Class::kCategorical;
    id.categorical = m;
    return id;
  };
  const auto vec = [&](VectorMeasure m) {
    id.cls = MeasureId::Class::kVector;
    id.vector = m;
    return id;
  };
  if (name == "overlap") return cat(CategoricalMeasure::kOverlap);
  if (name == "eskin") return cat(CategoricalMeasure::kEskin);
  if (name == "iof") return cat(CategoricalMeasure::kIof);
  if (name == "of") return cat(CategoricalMeasure::kOf);
  if (name == "lin") return cat(CategoricalMeasure::kLin);
  if (name == "goodall3") return cat(CategoricalMeasure::kGoodall3);
  if (name == "goodall4") return cat(CategoricalMeasure::kGoodall4);
  if (name == "inner") return vec(VectorMeasure::kInner);
  if (name == "l2" || name == "euclidean") return vec(VectorMeasure::kEuclidean);
  if (name == "manhattan") return vec(VectorMeasure::kManhattan);
  if (name == "cosine") return vec(VectorMeasure::kCosine);
  if (name.rfind("gd", 0) == 0) {
    id.cls = MeasureId::Class::kDiffusion;
    if (name == "gd") {
      id.order = 0;
      return id;
    }
    const std::string digits = name.substr(2);
    if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos) {
      id.order = std::stoi(digits);
      if (id.order >= 1) return id;
    }
  }
  throw std::invalid_argument("unknown measure '" + name + "' (see --list-measures)");
}

std::vector<std::string> list_measure_names() {
  return {"overlap", "eskin",     "iof",    "of",  "lin",
          "goodall3", "goodall4", "inner",  "l2",  "manhattan",
          "cosine",   "gd",       "gd1..gd9 (diffusion of fixed order)"};
}

ScoredMeasure make_diffusion_measure(std::shared_ptr<const DiffusionOperator> op,
                                     Variant variant) {
  ScoredMeasure out;
  std::string kind_name = to_string(variant.kind);
  out.name = "gd" + std::to_string(variant.order) + "-" + kind_name;
  out.orientation = Orientation::kHigherIsSimilar;
  out.scores = [op, variant](std::size_t query) {
    const SimilarityVector row = variant.kind == VariantKind::kReversed
                                     ? reversed_row(*op, query, variant.order)
                                     : forward_row(*op, query, variant.order);
    return row.scores;
  };
  return out;
}

}  // namespace gdsim
