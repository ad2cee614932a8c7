#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "tpskit/dataset.hpp"
#include "tpskit/presets.hpp"

namespace {

using namespace tpskit;

TEST(LabeledDataset, ValidateRejectsBadShapes) {
  LabeledDataset ds{Matrix::from_rows({{0, 0}, {1, 1}}), {0, 1}};
  EXPECT_NO_THROW(ds.validate());
  EXPECT_EQ(ds.num_classes(), 2);

  LabeledDataset gap{Matrix::from_rows({{0}, {1}}), {0, 2}};
  EXPECT_THROW(gap.validate(), std::invalid_argument);
  LabeledDataset neg{Matrix::from_rows({{0}}), {-1}};
  EXPECT_THROW(neg.validate(), std::invalid_argument);
  LabeledDataset mismatch{Matrix::from_rows({{0}, {1}}), {0}};
  EXPECT_THROW(mismatch.validate(), std::invalid_argument);
  LabeledDataset nan{Matrix::from_rows({{0}, {NAN}}), {0, 1}};
  EXPECT_THROW(nan.validate(), std::invalid_argument);
}

TEST(LabeledDataset, SubsetAndCounts) {
  LabeledDataset ds{Matrix::from_rows({{0}, {1}, {2}, {3}}), {1, 0, 1, 1}};
  EXPECT_EQ(ds.class_counts(), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(ds.indices_of(1), (std::vector<std::size_t>{0, 2, 3}));
  const std::vector<std::size_t> pick = {3, 1};
  const auto s = ds.subset(pick);
  EXPECT_EQ(s.labels, (std::vector<int>{1, 0}));
  EXPECT_EQ(s.points(0, 0), 3.0);
}

TEST(Generators, MoonsShapeAndBalance) {
  const auto ds = make_moons(500, noise_sigma(NoiseLevel::moderate), 0);
  EXPECT_EQ(ds.size(), 500u);
  EXPECT_EQ(ds.dim(), 2u);
  EXPECT_EQ(ds.class_counts(), (std::vector<std::size_t>{250, 250}));
  const auto clean = make_moons(4, 0.0, 0);
  EXPECT_NEAR(clean.points(0, 0), 1.0, 1e-15);  // t = 0 on the upper arc
  EXPECT_NEAR(clean.points(1, 0), -1.0, 1e-15); // t = pi
  EXPECT_NEAR(clean.points(2, 0), 0.0, 1e-15);
  EXPECT_NEAR(clean.points(2, 1), 0.5, 1e-15);
}

TEST(Generators, CirclesRadii) {
  const auto ds = make_circles(100, 0.0, 0.5, 3);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double r = std::hypot(ds.points(i, 0), ds.points(i, 1));
    EXPECT_NEAR(r, ds.labels[i] == 0 ? 1.0 : 0.5, 1e-12);
  }
  EXPECT_THROW(make_circles(100, 0.1, 1.0, 0), std::invalid_argument);
}

TEST(Generators, NoisePresets) {
  EXPECT_EQ(noise_sigma(NoiseLevel::none), 0.0);
  EXPECT_LT(noise_sigma(NoiseLevel::moderate), noise_sigma(NoiseLevel::high));
  EXPECT_EQ(parse_noise_level("high"), NoiseLevel::high);
  EXPECT_THROW(parse_noise_level("loud"), std::invalid_argument);
  EXPECT_THROW(make_moons(10, -0.1, 0), std::invalid_argument);
}

TEST(Generators, HypercubeRatioAndParity) {
  const auto ds = make_hypercube_clusters(2500, 4, 2.0, 1.0, 4.0, 0);
  EXPECT_EQ(ds.class_counts(), (std::vector<std::size_t>{2000, 500}));
  EXPECT_EQ(ds.dim(), 4u);
  // With a tiny sigma each point sits on a vertex of matching parity.
  const auto tight = make_hypercube_clusters(200, 3, 2.0, 1e-6, 3.0, 1);
  for (std::size_t i = 0; i < tight.size(); ++i) {
    int bits = 0;
    for (std::size_t j = 0; j < 3; ++j) bits += std::lround(tight.points(i, j) / 2.0);
    EXPECT_EQ(bits % 2, tight.labels[i]);
  }
  EXPECT_THROW(make_hypercube_clusters(10, 4, 2.0, 1.0, 0.5, 0), std::invalid_argument);
  EXPECT_THROW(make_hypercube_clusters(3, 4, 2.0, 1.0, 10.0, 0), std::invalid_argument);
}

TEST(Generators, BlobsCentres) {
  const auto ds = make_blobs({300, 300}, {{0, 0}, {10, -5}}, 0.5, 8);
  double mx[2] = {0, 0}, my[2] = {0, 0};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    mx[ds.labels[i]] += ds.points(i, 0) / 300.0;
    my[ds.labels[i]] += ds.points(i, 1) / 300.0;
  }
  EXPECT_NEAR(mx[0], 0.0, 0.1);
  EXPECT_NEAR(mx[1], 10.0, 0.1);
  EXPECT_NEAR(my[1], -5.0, 0.1);
  EXPECT_THROW(make_blobs({1, 2}, {{0, 0}}, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(make_blobs({1}, {{0, 0}}, 0.0, 0), std::invalid_argument);
}

TEST(Generators, DeterministicPerSeed) {
  EXPECT_EQ(make_moons(100, 0.2, 4).points, make_moons(100, 0.2, 4).points);
  EXPECT_NE(make_moons(100, 0.2, 4).points, make_moons(100, 0.2, 5).points);
  EXPECT_EQ(make_hypercube_clusters(100, 4, 2, 1, 4, 9).points,
            make_hypercube_clusters(100, 4, 2, 1, 4, 9).points);
}

TEST(Presets, KindsResolve) {
  for (const auto& kind : dataset_kinds()) {
    const auto ds = make_dataset({.kind = kind, .n = 200, .seed = 1});
    EXPECT_EQ(ds.size(), 200u) << kind;
    EXPECT_NO_THROW(ds.validate()) << kind;
  }
  EXPECT_EQ(make_dataset({.kind = "hypercube"}).size(), 2500u);
  EXPECT_EQ(make_dataset({.kind = "imbalanced"}).class_counts(), (std::vector<std::size_t>{400, 100}));
  EXPECT_THROW(make_dataset({.kind = "spirals"}), std::invalid_argument);
}

TEST(Csv, ReadsHeaderAndEncodesLabels) {
  std::istringstream in("x,y,class\n1.5,2,cat\n-3,4e1,dog\n\n0,0,cat\n");
  const auto csv = read_csv(in, "class");
  EXPECT_EQ(csv.feature_names, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(csv.label_names, (std::vector<std::string>{"cat", "dog"}));
  EXPECT_EQ(csv.data.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(csv.data.points(1, 1), 40.0);
}

TEST(Csv, LabelColumnMayComeFirst) {
  std::istringstream in("label,a\n7,1\n3,2\n");
  const auto csv = read_csv(in, "label");
  EXPECT_EQ(csv.label_names, (std::vector<std::string>{"7", "3"}));
  EXPECT_EQ(csv.data.points(1, 0), 2.0);
}

TEST(Csv, ErrorsNameRowAndColumn) {
  std::istringstream bad("a,b,label\n1,2,x\n3,NaN,y\n");
  try {
    read_csv(bad, "label");
    FAIL() << "NaN accepted";
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'b'"), std::string::npos) << msg;
  }
  std::istringstream missing("a,b\n1,2\n");
  EXPECT_THROW(read_csv(missing, "label"), std::runtime_error);
  std::istringstream ragged("a,label\n1,2,3\n");
  EXPECT_THROW(read_csv(ragged, "label"), std::runtime_error);
  std::istringstream empty("");
  EXPECT_THROW(read_csv(empty, "label"), std::runtime_error);
  EXPECT_THROW(load_csv("/nonexistent/file.csv", "label"), std::runtime_error);
}

TEST(Csv, WriteReadRoundTripIsExact) {
  const auto ds = make_moons(50, 0.3, 2);
  std::ostringstream out;
  write_csv(out, ds);
  std::istringstream in(out.str());
  const auto back = read_csv(in, "label");
  EXPECT_EQ(back.data.points, ds.points);
  // Labels are re-encoded by first appearance; moons starts with class 0.
  EXPECT_EQ(back.data.labels, ds.labels);
}

TEST(StratifiedSplit, Sizes) {
  const auto three = make_blobs({50, 50, 50}, {{0, 0}, {5, 0}, {0, 5}}, 1.0, 0);
  const auto s = stratified_split(three, 0.3, 0);
  EXPECT_EQ(s.train.size(), 105u);
  EXPECT_EQ(s.test.size(), 45u);
  EXPECT_EQ(s.test.class_counts(), (std::vector<std::size_t>{15, 15, 15}));

  const auto imb = make_dataset({.kind = "imbalanced"});
  const auto t = stratified_split(imb, 0.3, 1);
  EXPECT_EQ(t.train.class_counts(), (std::vector<std::size_t>{280, 70}));
  EXPECT_EQ(t.test.class_counts(), (std::vector<std::size_t>{120, 30}));
}

TEST(StratifiedSplit, PartitionAndDeterminism) {
  const auto ds = make_moons(101, 0.1, 3);
  const auto a = stratified_split(ds, 0.25, 7);
  const auto b = stratified_split(ds, 0.25, 7);
  const auto c = stratified_split(ds, 0.25, 8);
  EXPECT_EQ(a.test_indices, b.test_indices);
  EXPECT_NE(a.test_indices, c.test_indices);
  std::vector<std::size_t> all = a.train_indices;
  all.insert(all.end(), a.test_indices.begin(), a.test_indices.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
  EXPECT_TRUE(std::is_sorted(a.train_indices.begin(), a.train_indices.end()));
  EXPECT_EQ(all.size(), ds.size());
}

TEST(StratifiedSplit, Errors) {
  const auto ds = make_moons(20, 0.1, 3);
  EXPECT_THROW(stratified_split(ds, 0.0, 0), std::invalid_argument);
  EXPECT_THROW(stratified_split(ds, 1.0, 0), std::invalid_argument);
  LabeledDataset lone{Matrix::from_rows({{0}, {1}, {2}}), {0, 0, 1}};
  EXPECT_THROW(stratified_split(lone, 0.3, 0), std::invalid_argument);
}

TEST(StratifiedKfold, FoldsPartitionTheData) {
  const auto ds = make_blobs({23, 11}, {{0, 0}, {3, 3}}, 1.0, 4);
  const auto folds = stratified_kfold(ds, 5, 2);
  ASSERT_EQ(folds.size(), 5u);
  std::multiset<std::size_t> tested;
  for (const auto& f : folds) {
    EXPECT_EQ(f.train_indices.size() + f.test_indices.size(), ds.size());
    tested.insert(f.test_indices.begin(), f.test_indices.end());
  }
  EXPECT_EQ(tested.size(), ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(tested.count(i), 1u);
  EXPECT_THROW(stratified_kfold(ds, 1, 0), std::invalid_argument);
}

}  // namespace
