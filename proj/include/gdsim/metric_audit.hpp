#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gdsim/diffusion.hpp"
#include "gdsim/feature_matrix.hpp"

namespace gdsim {

// Measured metric-like properties of one variant's distance matrix.
struct MetricAuditReport {
  Variant variant;
  std::size_t n = 0;
  double symmetry_defect = 0.0;  // max |d(i,j) - d(j,i)|
  double worst_triangle = 0.0;   // min over ordered triples of d(i,j)+d(j,k)-d(i,k)
  std::array<std::size_t, 3> worst_triple{0, 0, 0};
  bool nonneg_ok = true;               // all similarities within [0,1] (1e-12 slack)
  double stochasticity_defect = 0.0;   // of the underlying forward/normalized matrix
  double p_ratio = 0.0;                // min p / max p of the input matrix
  bool theorem2_applicable = false;    // p_ratio > 2/3
  bool connected = false;
  std::size_t components = 0;

  // Sampling mode (n above the triple-scan cap): one-sided evidence only.
  bool sampled = false;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
};

struct AuditOptions {
  std::size_t triple_cap = 2000;     // exhaustive O(n^3) scan up to here
  std::size_t sample_count = 200000; // triples sampled above the cap
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::size_t matrix_cap = 20000;
};

// Computes the variant's pairwise distances and scans triples for the worst
// triangle slack. Below the cap the scan is exhaustive and the reported
// witness is the lexicographically smallest argmin; above it, seeded uniform
// triples give a violation-hunting sample, never a pass certificate.
MetricAuditReport audit(const FeatureMatrix& w, Variant variant, const AuditOptions& opts = {});

// min p / max p; a strict ratio above 2/3 guarantees the order-1 forward and
// reversed distances satisfy the triangle inequality.
double theorem2_ratio(const FeatureMatrix& w);

// The three-object two-feature instance with rows (1,0), (1/2,1/2), (0,1)
// whose triangle bound sum_k (w_1k + w_3k) w_2k / (w_1k + w_2k + w_3k)
// equals 2/3 exactly, optionally padded with extra objects supported on
// extra features only.
struct TightnessFixture {
  FeatureMatrix w;
  double intermediate_bound = 0.0;  // recomputed from the instance
};

TightnessFixture tightness_fixture(std::size_t extra_objects = 0);

// Union-find over the bipartite edges; components reported per object.
struct Connectivity {
  bool connected = false;
  std::size_t components = 0;
  std::vector<std::size_t> object_component;  // compact ids in first-seen order
};

Connectivity check_connectivity(const FeatureMatrix& w);

}  // namespace gdsim
