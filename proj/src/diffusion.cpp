#include "gdsim/diffusion.hpp"

#include <algorithm>
#include <stdexcept>

#include "gdsim/parallel.hpp"

namespace gdsim {

namespace {

void check_query(const DiffusionOperator& op, std::size_t i) {
  if (i >= op.objects())
    throw std::out_of_range("query index " + std::to_string(i) + " out of range, n = " +
                            std::to_string(op.objects()));
}

void check_order(int k) {
  if (k < 1) throw std::invalid_argument("diffusion order k must be >= 1");
}

// G <- G * S for dense row-major G, fixed inner summation order.
void dense_multiply(const ScoreMatrix& g, const ScoreMatrix& s, ScoreMatrix& out,
                    unsigned threads) {
  const std::size_t n = g.n;
  parallel_for(0, n, threads, [&](std::size_t i) {
    double* dst = out.values.data() + i * n;
    std::fill(dst, dst + n, 0.0);
    for (std::size_t l = 0; l < n; ++l) {
      const double gil = g.at(i, l);
      if (gil == 0.0) continue;
      const double* srow = s.values.data() + l * n;
      for (std::size_t j = 0; j < n; ++j) dst[j] += gil * srow[j];
    }
  });
}

}  // namespace

const char* to_string(VariantKind kind) {
  switch (kind) {
    case VariantKind::kForward: return "forward";
    case VariantKind::kReversed: return "reversed";
    case VariantKind::kNormalized: return "normalized";
  }
  return "?";
}

VariantKind parse_variant_kind(const std::string& name) {
  if (name == "forward") return VariantKind::kForward;
  if (name == "reversed") return VariantKind::kReversed;
  if (name == "normalized") return VariantKind::kNormalized;
  throw std::invalid_argument("unknown variant '" + name +
                              "' (expected forward, reversed, or normalized)");
}

std::string Variant::label() const {
  return std::string(to_string(kind)) + ":" + std::to_string(order);
}

SimilarityVector forward_row(const DiffusionOperator& op, std::size_t i, int k) {
  check_query(op, i);
  check_order(k);
  SimilarityVector out{i, {VariantKind::kForward, k}, std::vector<double>(op.objects(), 0.0)};
  out.scores[i] = 1.0;
  std::vector<double> scratch(op.features());
  for (int r = 0; r < k; ++r) op.push_round(out.scores, scratch);
  return out;
}

SimilarityVector reversed_row(const DiffusionOperator& op, std::size_t i, int k) {
  check_query(op, i);
  check_order(k);
  SimilarityVector out{i, {VariantKind::kReversed, k}, std::vector<double>(op.objects(), 0.0)};
  out.scores[i] = 1.0;
  std::vector<double> scratch(op.features());
  for (int r = 0; r < k; ++r) op.push_round_adjoint(out.scores, scratch);
  return out;
}

SimilarityVector normalized_row(const FeatureMatrix& w, std::size_t i, int k) {
  DiffusionOperator op(w.row_normalized());
  SimilarityVector out = forward_row(op, i, k);
  out.variant.kind = VariantKind::kNormalized;
  return out;
}

ScoreMatrix similarity_matrix(const FeatureMatrix& w, Variant variant,
                              const MatrixOptions& opts) {
  check_order(variant.order);
  const std::size_t n = w.objects();
  if (n > opts.cap)
    throw std::invalid_argument("similarity matrix for n = " + std::to_string(n) +
                                " exceeds cap " + std::to_string(opts.cap));
  const unsigned threads = opts.threads ? opts.threads : default_thread_count();
  const DiffusionOperator op(variant.kind == VariantKind::kNormalized ? w.row_normalized()
                                                                      : FeatureMatrix(w));

  ScoreMatrix g{n, std::vector<double>(n * n, 0.0)};
  // Order-1 rows are single pushes either way; higher orders use dense
  // powering for small n and independent row pushes otherwise.
  const bool dense_power = variant.order > 1 && n <= opts.dense_cutoff;
  const int push_rounds = dense_power ? 1 : variant.order;
  parallel_chunks(0, n, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> state(n), scratch(op.features());
    for (std::size_t i = lo; i < hi; ++i) {
      std::fill(state.begin(), state.end(), 0.0);
      state[i] = 1.0;
      for (int r = 0; r < push_rounds; ++r) op.push_round(state, scratch);
      std::copy(state.begin(), state.end(), g.values.begin() + i * n);
    }
  });
  if (dense_power) {
    ScoreMatrix s = g;
    ScoreMatrix tmp{n, std::vector<double>(n * n)};
    for (int r = 1; r < variant.order; ++r) {
      dense_multiply(g, s, tmp, threads);
      std::swap(g.values, tmp.values);
    }
  }

  if (variant.kind == VariantKind::kReversed) {
    ScoreMatrix t{n, std::vector<double>(n * n)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t.at(i, j) = g.at(j, i);
    return t;
  }
  return g;
}

std::vector<double> to_distance(std::vector<double> scores) {
  for (double& s : scores) s = 1.0 - s;
  return scores;
}

ScoreMatrix to_distance(ScoreMatrix scores) {
  for (double& s : scores.values) s = 1.0 - s;
  return scores;
}

SimilarityVector to_distance(SimilarityVector s) {
  s.scores = to_distance(std::move(s.scores));
  return s;
}

double pair_score(const FeatureMatrix& w, Variant variant, std::size_t i, std::size_t j) {
  check_order(variant.order);
  if (i >= w.objects() || j >= w.objects())
    throw std::out_of_range("pair index out of range");

  if (variant.kind == VariantKind::kNormalized)
    return pair_score(w.row_normalized(), {VariantKind::kForward, variant.order}, i, j);
  if (variant.kind == VariantKind::kReversed)
    return pair_score(w, {VariantKind::kForward, variant.order}, j, i);

  if (variant.order == 1) {
    const auto& q = w.col_sums();
    double acc = 0.0;
    w.for_each_in_row(i, [&](std::uint32_t s, double wis) {
      if (wis == 0.0) return;
      const double wjs = w.weight_at(j, s);
      if (wjs != 0.0) acc += wis * wjs / q[s];
    });
    return acc / w.row_sums()[i];
  }
  const DiffusionOperator op((FeatureMatrix(w)));
  return forward_row(op, i, variant.order).scores[j];
}

}  // namespace gdsim
