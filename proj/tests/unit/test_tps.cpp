#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_util.hpp"
#include "tpskit/metric.hpp"
#include "tpskit/presets.hpp"
#include "tpskit/tps.hpp"

namespace {

using namespace tpskit;

DistanceMatrix line_matrix(const std::vector<double>& xs) {
  Matrix pts(xs.size(), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) pts(i, 0) = xs[i];
  return pairwise_distances(pts, MetricKind::euclidean);
}

ScoredFeature scored(int dim, double birth, double death, double max_filtration) {
  ScoredFeature s;
  s.feature = {dim, birth, death};
  s.death = std::min(death, max_filtration);
  s.lifetime = s.death - birth;
  return s;
}

std::vector<ScoredFeature> with_lifetimes(const std::vector<double>& lifetimes) {
  std::vector<ScoredFeature> out;
  for (std::size_t i = 0; i < lifetimes.size(); ++i) {
    ScoredFeature s = scored(0, 0.0, lifetimes[i], 1e9);
    s.index = i;
    out.push_back(s);
  }
  return out;
}

TEST(TpsConfig, ValidationNamesTheBound) {
  TpsConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.q = 1.5;
  try {
    cfg.validate();
    FAIL() << "q=1.5 accepted";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("[0, 1]"), std::string::npos);
  }
  cfg = {};
  cfg.k = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.tau_min = -0.1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.homology_dim = 2;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.rel_tol = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(QuantInt, Examples) {
  const std::vector<double> l = {1, 2, 3, 4, 5};
  EXPECT_EQ(quant_int(l, 0.0), 1.0);
  EXPECT_EQ(quant_int(l, 0.25), 2.0);
  EXPECT_NEAR(quant_int(l, 0.1), 1.4, 1e-15);
  EXPECT_EQ(quant_int(std::vector<double>{7}, 0.0), 7.0);
  EXPECT_EQ(quant_int(std::vector<double>{7}, 0.63), 7.0);
  EXPECT_EQ(quant_int(std::vector<double>{7}, 1.0), 7.0);
  EXPECT_THROW(quant_int(std::vector<double>{}, 0.5), std::invalid_argument);
  EXPECT_THROW(quant_int(l, 1.01), std::invalid_argument);
}

TEST(QuantIntProperty, MatchesOracleMonotoneAndExactEndpoints) {
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    std::vector<double> l(n);
    for (auto& x : l) x = rng.uniform() * 10.0;
    const double q = rng.uniform();
    EXPECT_NEAR(quant_int(l, q), oracle::quantile(l, q), 1e-12);
    EXPECT_EQ(quant_int(l, 0.0), *std::min_element(l.begin(), l.end()));
    EXPECT_EQ(quant_int(l, 1.0), *std::max_element(l.begin(), l.end()));
    double prev = -1.0;
    for (int s = 0; s <= 20; ++s) {
      const double v = quant_int(l, s / 20.0);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(AvgInt, Examples) {
  EXPECT_EQ(avg_int(std::vector<double>{1, 2, 6}), 3.0);
  EXPECT_EQ(avg_int(std::vector<double>{5}), 5.0);
  EXPECT_EQ(avg_int(std::vector<double>{2, 4}), 3.0);
  EXPECT_THROW(avg_int(std::vector<double>{}), std::invalid_argument);
}

TEST(SelectFeatures, Examples) {
  const auto one = select_features(with_lifetimes({1, 2, 6}), 3.0, 1e-9);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].lifetime, 2.0);

  const auto both = select_features(with_lifetimes({2, 4}), 3.0, 1e-9);
  EXPECT_EQ(both.size(), 2u);

  const auto exact = select_features(with_lifetimes({3}), 3.0, 1e-9);
  EXPECT_EQ(exact.size(), 1u);

  EXPECT_THROW(select_features(std::vector<ScoredFeature>{}, 1.0, 1e-9), std::invalid_argument);
}

TEST(SelectFeatures, ToleranceAbsorbsRounding) {
  // 0.1 + 0.2 and 0.3 differ by one ulp; both are "the" closest lifetime.
  const auto sel = select_features(with_lifetimes({0.1 + 0.2, 0.3, 0.5}), 0.3, 1e-9);
  EXPECT_EQ(sel.size(), 2u);
}

// Points on a line at 0, 1, 3 with zero weights; feature (0, 1) has
// lifetime 1, so eps = 0.1: all three vertices match the birth and
// edge (0, 1) matches the death.
TEST(ExtractVertices, LineFixture) {
  const auto d = line_matrix({0, 1, 3});
  const std::vector<double> w = {0, 0, 0};
  const std::vector<ScoredFeature> feats = {scored(0, 0.0, 1.0, 3.0)};
  const std::vector<std::size_t> expect = {0, 1, 2};
  EXPECT_EQ(extract_vertices(feats, w, d, 0), expect);
  EXPECT_EQ(extract_vertices(feats, build_filtration(d, w, 0), 0), expect);
}

// Weights (0, 1, 0) on the same line: vertex 1 is born at 1 and merges at
// once through edge (0, 1) (value 1), a zero-length feature. eps = 0, so
// only vertex 1 (weight exactly 1) and the endpoints of edge (0, 1) (value
// exactly 1) are collected; edge (1, 2) at 2 and vertex 2 are not.
TEST(ExtractVertices, ZeroLifetimeFixture) {
  const auto d = line_matrix({0, 1, 3});
  const std::vector<double> w = {0, 1, 0};
  const std::vector<ScoredFeature> feats = {scored(0, 1.0, 1.0, 3.0)};
  const std::vector<std::size_t> expect = {0, 1};
  EXPECT_EQ(extract_vertices(feats, w, d, 0), expect);
  EXPECT_EQ(extract_vertices(feats, build_filtration(d, w, 0), 0), expect);
}

// Two points 2 apart, weights (0, 1.9). The essential class born at 0 is
// truncated at max_value = 2 (lifetime 2, eps 0.2). Vertex 0 matches the
// birth; vertex 1 (weight 1.9) does not, and is reached only through the
// edge at the maximum scale.
TEST(ExtractVertices, TruncatedEssentialFixture) {
  const auto d = line_matrix({0, 2});
  const std::vector<double> w = {0, 1.9};
  const auto f = build_filtration(d, w, 0);
  ASSERT_EQ(f.max_value(), 2.0);
  const auto diag = compute_persistence(f);
  const auto lifetimes = truncated_lifetimes(diag, 0.001);
  const auto essential = std::find_if(lifetimes.begin(), lifetimes.end(),
                                      [](const ScoredFeature& s) { return s.feature.essential(); });
  ASSERT_NE(essential, lifetimes.end());
  EXPECT_EQ(essential->lifetime, 2.0);
  const std::vector<ScoredFeature> feats = {*essential};
  const std::vector<std::size_t> expect = {0, 1};
  EXPECT_EQ(extract_vertices(feats, f, 0), expect);

  // The same feature under the h = 1 rule matches edges to the birth only.
  EXPECT_EQ(extract_vertices(feats, f, 1), std::vector<std::size_t>{0});
}

TEST(ExtractVertices, LoopUsesBirthEdges) {
  const auto d = pairwise_distances(Matrix::from_rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {5, 5}}), MetricKind::euclidean);
  const std::vector<double> w(5, 0.0);
  const std::vector<ScoredFeature> feats = {scored(1, 1.0, std::sqrt(2.0), 100.0)};
  const std::vector<std::size_t> expect = {0, 1, 2, 3};
  EXPECT_EQ(extract_vertices(feats, w, d, 1), expect);
}

TEST(IndexMap, ComposesAndSorts) {
  const IndexMap base({10, 20, 30, 40, 50});
  EXPECT_EQ(base.global(2), 30u);
  EXPECT_THROW(base.global(5), std::out_of_range);
  const std::vector<std::size_t> pick = {4, 1, 3};
  const IndexMap sub = base.restrict_to(pick);
  EXPECT_EQ(sub.size(), 3u);
  EXPECT_EQ(sub.global(0), 50u);
  EXPECT_EQ(sub.global(1), 20u);
  const std::vector<std::size_t> locals = {2, 0, 2};
  EXPECT_EQ(sub.to_global(locals), (std::vector<std::size_t>{40, 50}));
}

TEST(Bps, OverlappingBlobs) {
  const auto ds = testutil::two_blobs(50, 2.0, 3);
  TpsConfig cfg;
  for (int c = 0; c < 2; ++c) {
    const auto sel = bps(ds, c, cfg);
    EXPECT_FALSE(sel.fallback);
    EXPECT_FALSE(sel.indices.empty());
    EXPECT_LT(sel.indices.size(), 50u);
    EXPECT_TRUE(std::is_sorted(sel.indices.begin(), sel.indices.end()));
    for (auto i : sel.indices) EXPECT_EQ(ds.labels[i], c);
    EXPECT_EQ(bps(ds, c, cfg).indices, sel.indices);
  }
}

// Far apart classes: every finite H0 pair has zero lifetime, so only the
// truncated essential class survives and its band covers the whole class.
TEST(Bps, SeparatedBlobsKeepWholeClass) {
  const auto ds = testutil::two_blobs(50, 6.0, 3);
  BpsTrace trace;
  const auto sel = bps(ds, 0, TpsConfig{}, &trace);
  const auto kept = truncated_lifetimes(trace.neighbor_diagram, 0.001);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_TRUE(kept[0].feature.essential());
  EXPECT_FALSE(sel.fallback);
  EXPECT_EQ(sel.indices, ds.indices_of(0));
}

TEST(Bps, SinglePointClass) {
  auto ds = make_blobs({5, 1}, {{0, 0}, {4, 4}}, 1.0, 9);
  // The lone vertex is essential with zero truncated lifetime, so the
  // class falls back to its only member.
  const auto sel = bps(ds, 1, TpsConfig{});
  EXPECT_EQ(sel.indices, std::vector<std::size_t>{5});
}

TEST(Bps, FallbackWhenNothingSurvives) {
  const auto ds = testutil::two_blobs(20, 4.0, 1);
  TpsConfig cfg;
  cfg.tau_min = 1e6;
  const auto sel = bps(ds, 0, cfg);
  EXPECT_TRUE(sel.fallback);
  EXPECT_EQ(sel.indices, ds.indices_of(0));

  cfg = {};
  cfg.essential_policy = EssentialPolicy::drop;
  const auto one = make_blobs({1, 3}, {{0, 0}, {4, 4}}, 1.0, 2);
  EXPECT_TRUE(bps(one, 0, cfg).fallback);
}

TEST(Bps, Errors) {
  const auto ds = testutil::two_blobs(5, 4.0, 1);
  TpsConfig cfg;
  EXPECT_THROW(bps(ds, 2, cfg), std::invalid_argument);
  cfg.k = 6;
  EXPECT_THROW(bps(ds, 0, cfg), std::invalid_argument);
  cfg.k = 5;
  EXPECT_NO_THROW(bps(ds, 0, cfg));
  LabeledDataset single = make_blobs({4}, {{0, 0}}, 1.0, 1);
  EXPECT_THROW(bps(single, 0, TpsConfig{}), std::invalid_argument);
}

TEST(Bps, TraceRecordsBothStages) {
  const auto ds = testutil::two_blobs(30, 3.0, 5);
  BpsTrace trace;
  const auto sel = bps(ds, 1, TpsConfig{}, &trace);
  ASSERT_FALSE(sel.fallback);
  EXPECT_EQ(trace.neighbor_diagram.count(0), 30u);
  EXPECT_EQ(trace.radius_diagram.count(0), trace.slice.size());
  EXPECT_EQ(sel.neighbor_slice_size, trace.slice.size());
  EXPECT_TRUE(std::includes(trace.slice.begin(), trace.slice.end(), sel.indices.begin(), sel.indices.end()));
}

TEST(Tps, ThreeClassBlobs) {
  const auto ds = make_dataset({.kind = "well-separated", .seed = 4});
  const auto protos = tps(ds, TpsConfig{});
  ASSERT_EQ(protos.per_class.size(), 3u);
  for (const auto& [label, idx] : protos.per_class) EXPECT_FALSE(idx.empty());
  EXPECT_EQ(protos.source_size, 600u);
  EXPECT_GE(protos.selection_time_s, 0.0);
  EXPECT_NEAR(protos.reduction_percent(), 100.0 * (1.0 - protos.total() / 600.0), 1e-12);
}

TEST(Tps, RejectsSingleClass) {
  EXPECT_THROW(tps(make_blobs({4}, {{0, 0}}, 1.0, 1), TpsConfig{}), std::invalid_argument);
}

TEST(Tps, ImbalanceStaysMajorityHeavy) {
  const auto ds = make_dataset({.kind = "imbalanced", .seed = 0});
  const auto protos = tps(ds, TpsConfig{});
  EXPECT_GT(protos.per_class.at(0).size(), protos.per_class.at(1).size());
}

TEST(TpsProperty, OutputInvariants) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto ds = make_dataset({.kind = seed % 2 ? "mixed" : "moons", .n = 300, .seed = seed});
    TpsConfig cfg;
    cfg.q = 0.05 * static_cast<double>(1 + seed % 5);
    cfg.k = 1 + seed % 4;
    const auto protos = tps(ds, cfg);
    std::size_t total = 0;
    for (const auto& [label, idx] : protos.per_class) {
      EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
      EXPECT_EQ(std::adjacent_find(idx.begin(), idx.end()), idx.end());
      for (auto i : idx) {
        ASSERT_LT(i, ds.size());
        EXPECT_EQ(ds.labels[i], label);
      }
      total += idx.size();
    }
    EXPECT_LE(total, ds.size());
    EXPECT_EQ(tps(ds, cfg).per_class, protos.per_class);
  }
}

TEST(TpsProperty, InvariantUnderRowPermutation) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ds = make_dataset({.kind = "overlapping-clusters", .n = 240, .seed = seed});
    std::vector<std::size_t> perm(ds.size());
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed + 100);
    rng.shuffle(std::span<std::size_t>(perm));
    const auto shuffled = ds.subset(perm);
    TpsConfig cfg;
    cfg.q = 0.15;
    cfg.k = 3;
    const auto a = tps(ds, cfg);
    const auto b = tps(shuffled, cfg);
    for (const auto& [label, idx] : b.per_class) {
      std::vector<std::size_t> back;
      for (auto i : idx) back.push_back(perm[i]);
      std::sort(back.begin(), back.end());
      EXPECT_EQ(back, a.per_class.at(label)) << "seed " << seed << " class " << label;
    }
  }
}

// Raising tau_min only removes the smallest lifetimes, so the quantile of
// what is left can only grow.
TEST(TpsProperty, ThresholdNondecreasingInTau) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    PersistenceDiagram d;
    d.max_filtration = 10.0;
    const std::size_t n = 1 + rng.below(30);
    for (std::size_t i = 0; i < n; ++i) {
      const double b = rng.uniform() * 5.0;
      d.features.push_back({0, b, rng.below(8) == 0 ? kInfinity : b + rng.uniform() * 4.0});
    }
    const double q = rng.uniform();
    double prev = -1.0;
    for (double tau = 0.0; tau < 6.0; tau += 0.25) {
      const auto kept = truncated_lifetimes(d, tau);
      if (kept.empty()) break;
      std::vector<double> l;
      for (const auto& s : kept) l.push_back(s.lifetime);
      const double theta = quant_int(l, q);
      EXPECT_GE(theta, prev);
      prev = theta;
    }
  }
}

}  // namespace
