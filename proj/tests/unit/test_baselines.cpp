#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_util.hpp"
#include "tpskit/baselines.hpp"
#include "tpskit/metric.hpp"
#include "tpskit/presets.hpp"

namespace {

using namespace tpskit;

TEST(BaselineNames, RoundTrip) {
  for (auto m : {BaselineMethod::cnn, BaselineMethod::enn, BaselineMethod::cnn_enn, BaselineMethod::allknn,
                 BaselineMethod::kmeans, BaselineMethod::set_cover}) {
    EXPECT_EQ(parse_baseline_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_baseline_method("random"), std::invalid_argument);
}

// Every training point must be classified correctly by 1-NN on the
// condensed set once a full sweep adds nothing.
TEST(Cnn, ConsistentWithTrainingSet) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ds = make_dataset({.kind = "overlapping-clusters", .n = 150, .seed = seed});
    const auto kept = cnn_select(ds, MetricKind::euclidean, seed);
    EXPECT_TRUE(std::is_sorted(kept.begin(), kept.end()));
    EXPECT_LT(kept.size(), ds.size());
    const auto sub = ds.subset(kept);
    const auto rows = testutil::to_rows(sub.points);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const auto q = ds.points.row(i);
      EXPECT_EQ(oracle::knn_label(rows, sub.labels, {q.begin(), q.end()}, 1), ds.labels[i]);
    }
    EXPECT_EQ(cnn_select(ds, MetricKind::euclidean, seed), kept);
  }
}

TEST(Enn, RemovesMislabeledPoint) {
  LabeledDataset ds{Matrix::from_rows({{0, 0}, {0.1, 0}, {0, 0.1}, {0.1, 0.1}, {0.05, 0.05},
                                       {5, 5}, {5.1, 5}, {5, 5.1}}),
                    {0, 0, 0, 0, 1, 1, 1, 1}};
  const auto kept = enn_select(ds, 3, MetricKind::euclidean);
  EXPECT_EQ(kept, (std::vector<std::size_t>{0, 1, 2, 3, 5, 6, 7}));
  EXPECT_THROW(enn_select(ds, 8, MetricKind::euclidean), std::invalid_argument);
}

TEST(AllKnn, OneEqualsEnnOne) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ds = make_dataset({.kind = "overlapping-blobs", .n = 160, .seed = seed});
    EXPECT_EQ(allknn_select(ds, 1, MetricKind::euclidean), enn_select(ds, 1, MetricKind::euclidean));
  }
}

TEST(AllKnn, NestedInK) {
  const auto ds = make_dataset({.kind = "mixed", .n = 200, .seed = 3});
  auto prev = allknn_select(ds, 1, MetricKind::euclidean);
  for (std::size_t k = 2; k <= 5; ++k) {
    const auto cur = allknn_select(ds, k, MetricKind::euclidean);
    EXPECT_TRUE(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
    prev = cur;
  }
}

TEST(CnnEnn, SubsetOfCnnAndSmallSetsUnedited) {
  const auto ds = make_dataset({.kind = "overlapping-clusters", .n = 150, .seed = 2});
  BaselineConfig cfg;
  const auto cnn = cnn_select(ds, cfg.metric, cfg.seed);
  const auto both = cnn_enn_select(ds, cfg);
  EXPECT_TRUE(std::includes(cnn.begin(), cnn.end(), both.begin(), both.end()));
  EXPECT_FALSE(both.empty());

  const auto sep = make_dataset({.kind = "well-separated", .n = 60, .seed = 2});
  cfg.k_edit = 50;
  EXPECT_EQ(cnn_enn_select(sep, cfg), cnn_select(sep, cfg.metric, cfg.seed));
}

TEST(Kmeans, RecoversClusterMeans) {
  const auto ds = make_blobs({40, 40, 40, 40}, {{0, 0}, {10, 0}, {0, 10}, {10, 10}}, 0.1, 1);
  LabeledDataset relabeled = ds;
  for (auto& y : relabeled.labels) y = y % 2;  // class 0: (0,0),(0,10); class 1: (10,0),(10,10)
  const auto centres = kmeans_select(relabeled, 2, MetricKind::euclidean, 0);
  ASSERT_EQ(centres.size(), 4u);
  EXPECT_EQ(centres.class_counts(), (std::vector<std::size_t>{2, 2}));
  for (std::size_t i = 0; i < centres.size(); ++i) {
    const double x = centres.points(i, 0), y = centres.points(i, 1);
    const double gx = std::round(x / 10.0) * 10.0, gy = std::round(y / 10.0) * 10.0;
    EXPECT_NEAR(x, gx, 0.1);
    EXPECT_NEAR(y, gy, 0.1);
    EXPECT_EQ(centres.labels[i], gx == 10.0 ? 1 : 0);
  }
  EXPECT_EQ(kmeans_select(relabeled, 2, MetricKind::euclidean, 0).points, centres.points);
}

TEST(Kmeans, Errors) {
  const auto ds = testutil::two_blobs(5, 4.0, 1);
  EXPECT_THROW(kmeans_select(ds, 6, MetricKind::euclidean, 0), std::invalid_argument);
  try {
    kmeans_select(ds, 2, MetricKind::cosine, 0);
    FAIL() << "cosine accepted";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("spherical"), std::string::npos);
  }
  EXPECT_THROW(kmeans_select(ds, 2, MetricKind::manhattan, 0), std::invalid_argument);
  BaselineConfig cfg;
  cfg.method = BaselineMethod::kmeans;
  cfg.metric = MetricKind::cosine;
  EXPECT_THROW(run_baseline(ds, cfg), std::invalid_argument);
}

TEST(SetCover, CoversEveryPointWithCleanBalls) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ds = make_dataset({.kind = "overlapping-clusters", .n = 120, .seed = seed});
    const double radius = 0.8;
    const auto kept = set_cover_select(ds, radius, MetricKind::euclidean);
    const auto d = pairwise_distances(ds.points, MetricKind::euclidean);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const bool covered = std::any_of(kept.begin(), kept.end(), [&](std::size_t c) {
        return ds.labels[c] == ds.labels[i] && d(c, i) <= radius;
      });
      EXPECT_TRUE(covered) << "point " << i;
    }
  }
}

// Greedy is within the harmonic bound of the exhaustive optimum.
TEST(SetCover, GreedyNearOptimalOnSmallInstances) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    LabeledDataset ds = make_blobs({12, 3}, {{0, 0}, {3, 3}}, 1.0, seed);
    const double radius = 1.2;
    const auto kept = set_cover_select(ds, radius, MetricKind::euclidean);
    const auto d = pairwise_distances(ds.points, MetricKind::euclidean);
    const auto members = ds.indices_of(0);
    std::vector<std::vector<std::size_t>> sets;
    std::size_t largest = 1;
    for (std::size_t p : members) {
      bool clean = true;
      for (std::size_t j = 0; j < ds.size(); ++j) clean &= ds.labels[j] == 0 || d(p, j) > radius;
      std::vector<std::size_t> cov;
      if (clean) {
        for (std::size_t l = 0; l < members.size(); ++l) {
          if (d(p, members[l]) <= radius) cov.push_back(l);
        }
      } else {
        // An unusable centre still lets the point stand for itself.
        for (std::size_t l = 0; l < members.size(); ++l) {
          if (members[l] == p) cov.push_back(l);
        }
      }
      largest = std::max(largest, cov.size());
      sets.push_back(cov);
    }
    const std::size_t opt = oracle::min_set_cover(members.size(), sets);
    const auto greedy = static_cast<std::size_t>(
        std::count_if(kept.begin(), kept.end(), [&](std::size_t i) { return ds.labels[i] == 0; }));
    double harmonic = 0.0;
    for (std::size_t k = 1; k <= largest; ++k) harmonic += 1.0 / static_cast<double>(k);
    EXPECT_GE(greedy, opt);
    EXPECT_LE(static_cast<double>(greedy), harmonic * static_cast<double>(opt) + 1e-9);
  }
}

TEST(RunBaseline, DispatchesAndValidates) {
  const auto ds = make_dataset({.kind = "well-separated", .n = 90, .seed = 1});
  BaselineConfig cfg;
  for (auto m : {BaselineMethod::cnn, BaselineMethod::enn, BaselineMethod::cnn_enn, BaselineMethod::allknn,
                 BaselineMethod::set_cover}) {
    cfg.method = m;
    const auto sel = run_baseline(ds, cfg);
    EXPECT_FALSE(sel.synthetic);
    EXPECT_GT(sel.count(), 0u) << to_string(m);
  }
  cfg.method = BaselineMethod::kmeans;
  const auto km = run_baseline(ds, cfg);
  ASSERT_TRUE(km.synthetic);
  EXPECT_EQ(km.count(), 30u);
  cfg.method = BaselineMethod::set_cover;
  cfg.ball_radius = 0.0;
  EXPECT_THROW(run_baseline(ds, cfg), std::invalid_argument);
}

}  // namespace
