#include "gdsim/metric_audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gdsim/parallel.hpp"
#include "gdsim/rng.hpp"

namespace gdsim {

namespace {

struct TripleScanResult {
  double worst = std::numeric_limits<double>::infinity();
  std::array<std::size_t, 3> witness{0, 0, 0};

  void consider(double slack, std::size_t i, std::size_t j, std::size_t k) {
    // Strict improvement only: scanning in lexicographic order keeps the
    // smallest witness on ties.
    if (slack < worst) {
      worst = slack;
      witness = {i, j, k};
    }
  }
};

TripleScanResult exhaustive_scan(const ScoreMatrix& d, unsigned threads) {
  const std::size_t n = d.n;
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  std::vector<TripleScanResult> partial(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  parallel_for(0, workers, static_cast<unsigned>(workers), [&](std::size_t t) {
    TripleScanResult& local = partial[t];
    const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    for (std::size_t i = lo; i < hi; ++i) {
      const double* di = d.values.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double dij = di[j];
        const double* dj = d.values.data() + j * n;
        for (std::size_t k = 0; k < n; ++k) local.consider(dij + dj[k] - di[k], i, j, k);
      }
    }
  });
  TripleScanResult best;
  for (const auto& part : partial)
    if (part.worst < best.worst) best = part;  // ascending i-chunks: first wins ties
  return best;
}

TripleScanResult sampled_scan(const ScoreMatrix& d, std::size_t samples, std::uint64_t seed,
                              unsigned threads) {
  const std::size_t n = d.n;
  const std::size_t workers = std::max<std::size_t>(1, threads);
  std::vector<TripleScanResult> partial(workers);
  const std::size_t chunk = (samples + workers - 1) / workers;
  parallel_for(0, workers, static_cast<unsigned>(workers), [&](std::size_t t) {
    TripleScanResult& local = partial[t];
    const std::size_t lo = t * chunk, hi = std::min(samples, lo + chunk);
    for (std::size_t s = lo; s < hi; ++s) {
      SplitMix64 rng(derive_seed(seed, s));
      const std::size_t i = rng.below(n), j = rng.below(n), k = rng.below(n);
      local.consider(d.at(i, j) + d.at(j, k) - d.at(i, k), i, j, k);
    }
  });
  TripleScanResult best;
  for (const auto& part : partial) {
    if (part.worst < best.worst) best = part;
  }
  return best;
}

}  // namespace

MetricAuditReport audit(const FeatureMatrix& w, Variant variant, const AuditOptions& opts) {
  const unsigned threads = opts.threads ? opts.threads : default_thread_count();
  const std::size_t n = w.objects();

  MetricAuditReport report;
  report.variant = variant;
  report.n = n;
  report.p_ratio = w.row_sum_ratio();
  report.theorem2_applicable = report.p_ratio > 2.0 / 3.0;
  report.seed = opts.seed;

  const Connectivity conn = check_connectivity(w);
  report.connected = conn.connected;
  report.components = conn.components;

  // The reversed matrix is the transpose of the forward one; row sums of the
  // generating forward (or normalized) matrix carry the stochasticity check.
  MatrixOptions mopts;
  mopts.cap = opts.matrix_cap;
  mopts.threads = threads;
  const Variant generator{variant.kind == VariantKind::kReversed ? VariantKind::kForward
                                                                 : variant.kind,
                          variant.order};
  ScoreMatrix sim = similarity_matrix(w, generator, mopts);
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) row_sum += sim.at(i, j);
    report.stochasticity_defect = std::max(report.stochasticity_defect, std::abs(row_sum - 1.0));
  }
  if (variant.kind == VariantKind::kReversed) {
    ScoreMatrix t{n, std::vector<double>(n * n)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sim.at(j, i);
    sim = std::move(t);
  }

  for (double s : sim.values)
    if (s < -1e-12 || s > 1.0 + 1e-12) report.nonneg_ok = false;

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      report.symmetry_defect =
          std::max(report.symmetry_defect, std::abs(sim.at(i, j) - sim.at(j, i)));

  const ScoreMatrix dist = to_distance(std::move(sim));
  TripleScanResult scan;
  if (n <= opts.triple_cap) {
    scan = exhaustive_scan(dist, threads);
  } else {
    report.sampled = true;
    report.sample_count = opts.sample_count;
    scan = sampled_scan(dist, opts.sample_count, opts.seed, threads);
  }
  report.worst_triangle = scan.worst;
  report.worst_triple = scan.witness;
  return report;
}

double theorem2_ratio(const FeatureMatrix& w) { return w.row_sum_ratio(); }

TightnessFixture tightness_fixture(std::size_t extra_objects) {
  std::vector<Triplet> entries = {
      {0, 0, 1.0}, {1, 0, 0.5}, {1, 1, 0.5}, {2, 1, 1.0},
  };
  std::size_t m = 2;
  if (extra_objects > 0) {
    m = 4;  // extra rows live on features 2 and 3 only
    for (std::size_t t = 0; t < extra_objects; ++t) entries.push_back({3 + t, 2 + (t % 2), 1.0});
  }
  TightnessFixture fixture{FeatureMatrix::build(std::move(entries), 3 + extra_objects, m), 0.0};

  const FeatureMatrix& w = fixture.w;
  for (std::size_t s = 0; s < w.features(); ++s) {
    const double w1 = w.weight_at(0, s), w2 = w.weight_at(1, s), w3 = w.weight_at(2, s);
    if (w1 + w2 + w3 > 0.0) fixture.intermediate_bound += (w1 + w3) * w2 / (w1 + w2 + w3);
  }
  return fixture;
}

Connectivity check_connectivity(const FeatureMatrix& w) {
  const std::size_t n = w.objects(), m = w.features();
  std::vector<std::size_t> parent(n + m);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    w.for_each_in_row(i, [&](std::uint32_t s, double v) {
      if (v == 0.0) return;
      const std::size_t a = find(i), b = find(n + s);
      if (a != b) parent[a] = b;
    });

  Connectivity conn;
  conn.object_component.assign(n, 0);
  std::vector<std::size_t> compact(n + m, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (compact[root] == static_cast<std::size_t>(-1)) compact[root] = conn.components++;
    conn.object_component[i] = compact[root];
  }
  conn.connected = conn.components == 1;
  return conn;
}

}  // namespace gdsim
