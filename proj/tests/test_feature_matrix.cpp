#include <doctest.h>

#include <cmath>

#include "gdsim/diffusion.hpp"
#include "gdsim/feature_matrix.hpp"
#include "gdsim/rng.hpp"
#include "support/instances.hpp"

using namespace gdsim;

TEST_SUITE_BEGIN("feature_matrix");

TEST_CASE("build caches row and column sums") {
  const FeatureMatrix w = testing::counterexample();
  CHECK(w.objects() == 3);
  CHECK(w.features() == 2);
  CHECK(w.row_sums() == std::vector<double>{1.0, 8.0, 12.0});
  CHECK(w.col_sums() == std::vector<double>{3.0, 18.0});
  CHECK(w.recompute_defect() == 0.0);

  const FeatureMatrix single = FeatureMatrix::build({{0, 0, 1.0}}, 1, 1);
  CHECK(single.row_sums() == std::vector<double>{1.0});
  CHECK(single.col_sums() == std::vector<double>{1.0});
}

TEST_CASE("figure example row sum") {
  const FeatureMatrix w = testing::walk_example();
  CHECK(w.row_sums()[0] == 10.0);
}

TEST_CASE("build rejects bad input") {
  CHECK_THROWS_AS(FeatureMatrix::build({{0, 0, -1.0}}, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(FeatureMatrix::build({{0, 0, 1.0}, {0, 0, 2.0}}, 1, 1), std::invalid_argument);
  // object 1 has no features
  CHECK_THROWS_AS(FeatureMatrix::build({{0, 0, 1.0}}, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(FeatureMatrix::build({{0, 2, 1.0}}, 1, 2), std::invalid_argument);
}

TEST_CASE("all-zero feature columns are dropped and recorded") {
  const FeatureMatrix w = FeatureMatrix::build({{0, 0, 1.0}, {1, 2, 2.0}}, 2, 3);
  CHECK(w.features() == 2);
  CHECK(w.dropped_features() == std::vector<std::size_t>{1});
  CHECK(w.col_sums() == std::vector<double>{1.0, 2.0});
}

TEST_CASE("dense fallback picks storage by density") {
  const FeatureMatrix sparse = FeatureMatrix::build({{0, 0, 1.0}, {1, 1, 1.0}}, 2, 2);
  CHECK_FALSE(sparse.is_dense());
  const FeatureMatrix dense = FeatureMatrix::from_dense({1, 2, 3, 4}, 2, 2);
  CHECK(dense.is_dense());
  CHECK(dense.row_sums() == std::vector<double>{3.0, 7.0});
  const FeatureMatrix forced =
      FeatureMatrix::from_dense({1, 2, 3, 4}, 2, 2, StorageMode::kSparse);
  CHECK_FALSE(forced.is_dense());
  CHECK(forced.row_sums() == std::vector<double>{3.0, 7.0});
}

TEST_CASE("row_normalized rescales rows and keeps the pattern") {
  const FeatureMatrix w = testing::walk_example();
  const FeatureMatrix nw = w.row_normalized();
  CHECK(nw.nnz() == w.nnz());
  const std::vector<double> expected{0.3, 0.5, 0.0, 0.2, 0.0};
  for (std::size_t s = 0; s < 5; ++s)
    CHECK(nw.weight_at(0, s) == doctest::Approx(expected[s]).epsilon(1e-15));

  SUBCASE("idempotent on an already normalized matrix") {
    const FeatureMatrix again = nw.row_normalized();
    for (std::size_t i = 0; i < w.objects(); ++i)
      for (std::size_t s = 0; s < w.features(); ++s)
        CHECK(again.weight_at(i, s) == doctest::Approx(nw.weight_at(i, s)).epsilon(1e-14));
  }

  SUBCASE("two-entry row") {
    const FeatureMatrix tiny = FeatureMatrix::build({{0, 0, 2.0}, {0, 1, 6.0}}, 1, 2);
    const FeatureMatrix tn = tiny.row_normalized();
    CHECK(tn.weight_at(0, 0) == 0.25);
    CHECK(tn.weight_at(0, 1) == 0.75);
  }
}

TEST_CASE("operator maps are row-stochastic and S1 = 1") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const FeatureMatrix w = testing::random_instance(rng);
    const DiffusionOperator op(w);
    CHECK(op.stochasticity_defect() <= 1e-9);

    std::vector<double> ones(w.objects(), 1.0), scratch(w.features());
    op.push_round_adjoint(ones, scratch);
    for (double v : ones) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("make_operator reproduces the counterexample rows") {
  const DiffusionOperator op(testing::counterexample());
  const SimilarityVector row0 = forward_row(op, 0, 1);
  CHECK(row0.scores[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(row0.scores[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(row0.scores[2] == 0.0);
  const SimilarityVector row1 = forward_row(op, 1, 1);
  CHECK(row1.scores[0] == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(row1.scores[1] == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
  CHECK(row1.scores[2] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("two identical single-feature objects give the symmetric chain") {
  const DiffusionOperator op(FeatureMatrix::build({{0, 0, 1.0}, {1, 0, 1.0}}, 2, 1));
  for (int k : {1, 2, 5}) {
    const SimilarityVector row = forward_row(op, 0, k);
    CHECK(row.scores[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(row.scores[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("row-normalized matrices give symmetric S") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const FeatureMatrix w = testing::random_instance(rng).row_normalized();
    const ScoreMatrix s = similarity_matrix(w, {VariantKind::kForward, 1}, {});
    for (std::size_t i = 0; i < s.n; ++i)
      for (std::size_t j = i + 1; j < s.n; ++j)
        CHECK(std::abs(s.at(i, j) - s.at(j, i)) <= 1e-12);
  }
}

TEST_CASE("equal row sums iff symmetric S on connected instances") {
  SplitMix64 rng(29);
  int unequal_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    testing::InstanceConfig cfg;
    cfg.require_connected = true;
    const FeatureMatrix w = testing::random_instance(rng, cfg);
    const ScoreMatrix s = similarity_matrix(w, {VariantKind::kForward, 1}, {});
    double defect = 0.0;
    for (std::size_t i = 0; i < s.n; ++i)
      for (std::size_t j = i + 1; j < s.n; ++j)
        defect = std::max(defect, std::abs(s.at(i, j) - s.at(j, i)));
    const bool equal_sums = w.row_sum_ratio() > 1.0 - 1e-9;
    if (!equal_sums) ++unequal_seen;
    CHECK((defect <= 1e-12) == equal_sums);
  }
  CHECK(unequal_seen > 0);  // the generator must exercise the interesting side

  // Constructed equal-sum instances hit the other side.
  for (int trial = 0; trial < 20; ++trial) {
    const FeatureMatrix w = testing::equal_row_sum_instance(rng, 2.5);
    const ScoreMatrix s = similarity_matrix(w, {VariantKind::kForward, 1}, {});
    for (std::size_t i = 0; i < s.n; ++i)
      for (std::size_t j = i + 1; j < s.n; ++j)
        CHECK(std::abs(s.at(i, j) - s.at(j, i)) <= 1e-12);
  }
}

TEST_SUITE_END();
