#include <doctest.h>

#include <cmath>

#include "gdsim/metric_audit.hpp"
#include "gdsim/rng.hpp"
#include "support/instances.hpp"

using namespace gdsim;

TEST_SUITE_BEGIN("metric_audit");

TEST_CASE("counterexample audit reproduces the -1/6 triangle deficit") {
  const FeatureMatrix w = testing::counterexample();

  const MetricAuditReport fwd = audit(w, {VariantKind::kForward, 1});
  CHECK(fwd.worst_triangle == doctest::Approx(-1.0 / 6.0).epsilon(1e-13));
  CHECK(std::abs(fwd.worst_triangle + 1.0 / 6.0) <= 1e-12);
  CHECK(fwd.worst_triple == std::array<std::size_t, 3>{0, 1, 2});
  CHECK_FALSE(fwd.theorem2_applicable);
  CHECK(fwd.connected);
  CHECK(fwd.nonneg_ok);
  CHECK(fwd.stochasticity_defect <= 1e-12);
  CHECK_FALSE(fwd.sampled);

  const MetricAuditReport rev = audit(w, {VariantKind::kReversed, 1});
  CHECK(std::abs(rev.worst_triangle + 1.0 / 6.0) <= 1e-12);
  CHECK(rev.worst_triple == std::array<std::size_t, 3>{2, 1, 0});
}

TEST_CASE("theorem2_ratio") {
  CHECK(theorem2_ratio(testing::counterexample()) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));

  // one-hot rows have constant sums
  const FeatureMatrix onehot =
      FeatureMatrix::build({{0, 0, 1.0}, {0, 2, 1.0}, {1, 1, 1.0}, {1, 2, 1.0}}, 2, 3);
  CHECK(theorem2_ratio(onehot) == 1.0);

  const FeatureMatrix two = FeatureMatrix::build({{0, 0, 3.0}, {1, 1, 2.5}}, 2, 2);
  CHECK(theorem2_ratio(two) == doctest::Approx(2.5 / 3.0).epsilon(1e-15));
  CHECK(audit(two, {VariantKind::kForward, 1}).theorem2_applicable);
}

TEST_CASE("one-hot instances behave as metametrics for every variant") {
  // 5 objects, 2 categorical attributes one-hot encoded
  std::vector<Triplet> entries;
  const std::size_t first[5] = {0, 1, 0, 2, 1};
  const std::size_t second[5] = {3, 3, 4, 4, 3};
  for (std::size_t i = 0; i < 5; ++i) {
    entries.push_back({i, first[i], 1.0});
    entries.push_back({i, second[i], 1.0});
  }
  const FeatureMatrix w = FeatureMatrix::build(std::move(entries), 5, 5);

  for (VariantKind kind : {VariantKind::kForward, VariantKind::kReversed, VariantKind::kNormalized})
    for (int k : {1, 2, 3}) {
      const MetricAuditReport report = audit(w, {kind, k});
      CHECK(report.symmetry_defect <= 1e-12);
      CHECK(report.worst_triangle >= -1e-12);
      CHECK(report.p_ratio == 1.0);
    }
}

TEST_CASE("normalized variant passes the metametric checks on random instances") {
  SplitMix64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const FeatureMatrix w = testing::random_instance(rng);
    for (int k : {1, 2, 3, 5}) {
      const MetricAuditReport report = audit(w, {VariantKind::kNormalized, k});
      CAPTURE(trial);
      CHECK(report.symmetry_defect <= 1e-12);
      CHECK(report.worst_triangle >= -1e-12);
      CHECK(report.nonneg_ok);
    }
  }
}

TEST_CASE("forward and reversed order 1 pass when the row-sum ratio clears 2/3") {
  SplitMix64 rng(103);
  int accepted = 0;
  while (accepted < 100) {
    const FeatureMatrix w = testing::random_instance(rng);
    if (!(w.row_sum_ratio() > 2.0 / 3.0)) continue;
    ++accepted;
    for (VariantKind kind : {VariantKind::kForward, VariantKind::kReversed}) {
      const MetricAuditReport report = audit(w, {kind, 1});
      CHECK(report.theorem2_applicable);
      CHECK(report.worst_triangle >= -1e-12);
    }
  }
}

TEST_CASE("tightness fixture") {
  const TightnessFixture fixture = tightness_fixture();
  CHECK(std::abs(fixture.intermediate_bound - 2.0 / 3.0) <= 1e-12);

  // Normalized similarities: pairs (1,2) and (2,3) score 1/3, pair (1,3)
  // scores 0. The Appendix labels the same numbers as distances; either way
  // the bound above stays 2/3 (recorded reading: these are similarities).
  const FeatureMatrix& w = fixture.w;
  CHECK(std::abs(pair_score(w, {VariantKind::kNormalized, 1}, 0, 1) - 1.0 / 3.0) <= 1e-12);
  CHECK(std::abs(pair_score(w, {VariantKind::kNormalized, 1}, 1, 2) - 1.0 / 3.0) <= 1e-12);
  CHECK(pair_score(w, {VariantKind::kNormalized, 1}, 0, 2) == 0.0);

  // Triangle slack of the normalized distances on the witness triple.
  const double d01 = 1.0 - pair_score(w, {VariantKind::kNormalized, 1}, 0, 1);
  const double d12 = 1.0 - pair_score(w, {VariantKind::kNormalized, 1}, 1, 2);
  const double d02 = 1.0 - pair_score(w, {VariantKind::kNormalized, 1}, 0, 2);
  CHECK(std::abs(d01 + d12 - d02 - 1.0 / 3.0) <= 1e-12);

  SUBCASE("padded construction keeps the bound") {
    const TightnessFixture padded = tightness_fixture(4);
    CHECK(padded.w.objects() == 7);
    CHECK(std::abs(padded.intermediate_bound - 2.0 / 3.0) <= 1e-12);
    CHECK(std::abs(pair_score(padded.w, {VariantKind::kNormalized, 1}, 0, 1) - 1.0 / 3.0) <=
          1e-12);
    CHECK(pair_score(padded.w, {VariantKind::kNormalized, 1}, 0, 2) == 0.0);
  }
}

TEST_CASE("connectivity") {
  const FeatureMatrix id2 = FeatureMatrix::build({{0, 0, 1.0}, {1, 1, 1.0}}, 2, 2);
  const Connectivity two = check_connectivity(id2);
  CHECK_FALSE(two.connected);
  CHECK(two.components == 2);
  CHECK(two.object_component == std::vector<std::size_t>{0, 1});

  const FeatureMatrix chain = FeatureMatrix::build({{0, 0, 1.0}, {1, 0, 1.0}}, 2, 1);
  CHECK(check_connectivity(chain).connected);

  CHECK(check_connectivity(testing::counterexample()).components == 1);
}

TEST_CASE("sampled scan reports itself and finds planted violations") {
  const FeatureMatrix w = testing::counterexample();
  AuditOptions opts;
  opts.triple_cap = 2;  // force sampling on n = 3
  opts.sample_count = 5000;
  opts.seed = 9;
  const MetricAuditReport report = audit(w, {VariantKind::kForward, 1}, opts);
  CHECK(report.sampled);
  CHECK(report.sample_count == 5000);
  // 27 possible triples; 5000 draws find the violation with certainty
  CHECK(report.worst_triangle == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
}

TEST_SUITE_END();
