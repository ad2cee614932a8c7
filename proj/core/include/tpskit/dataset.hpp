#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tpskit/matrix.hpp"

namespace tpskit {

// Points with integer class labels in {0..K-1}.
struct LabeledDataset {
  Matrix points;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dim() const noexcept { return points.cols(); }

  // K = 1 + max label; valid datasets use every label in {0..K-1}.
  int num_classes() const noexcept;
  std::vector<std::size_t> class_counts() const;
  std::vector<std::size_t> indices_of(int label) const;
  LabeledDataset subset(std::span<const std::size_t> indices) const;

  // Throws std::invalid_argument on shape mismatch, empty data, non-finite
  // coordinates, negative labels or unused labels.
  void validate() const;
};

// Noise presets for the moons and circles generators.
enum class NoiseLevel { none, moderate, high };
double noise_sigma(NoiseLevel level) noexcept;
NoiseLevel parse_noise_level(const std::string& name);

LabeledDataset make_blobs(const std::vector<std::size_t>& n_per_class,
                          const std::vector<std::vector<double>>& centers, double sigma,
                          std::uint64_t seed);

// Two interleaving unit half circles: class 0 on the upper arc centred at
// the origin, class 1 on the lower arc centred at (1, 0.5).
LabeledDataset make_moons(std::size_t n_total, double noise, std::uint64_t seed);

// Unit circle (class 0) around an inner circle of radius `radius_factor` (class 1).
LabeledDataset make_circles(std::size_t n_total, double noise, double radius_factor,
                            std::uint64_t seed);

// Binary Gaussian clusters centred at the vertices of [0, side]^dim. Vertices
// with an even number of nonzero coordinates belong to class 0, odd ones to
// class 1; class 0 is the majority with |class 0| / |class 1| ~= imbalance_ratio.
LabeledDataset make_hypercube_clusters(std::size_t n_total, std::size_t dim, double side,
                                       double sigma, double imbalance_ratio, std::uint64_t seed);

struct CsvDataset {
  LabeledDataset data;
  std::vector<std::string> feature_names;
  // label_names[code] is the original label text for encoded class `code`.
  std::vector<std::string> label_names;
};

// Header row is mandatory. Labels are encoded by order of first appearance.
CsvDataset load_csv(const std::string& path, const std::string& label_column);
CsvDataset read_csv(std::istream& in, const std::string& label_column,
                    const std::string& source_name = "<stream>");

// Features as f0..f{d-1} (or the given names) followed by the label column.
// Doubles are written with 17 significant digits so a reload is exact.
void write_csv(std::ostream& out, const LabeledDataset& ds, const std::string& label_column = "label",
               const std::vector<std::string>& feature_names = {},
               const std::vector<std::string>& label_names = {});

struct SplitPair {
  LabeledDataset train;
  LabeledDataset test;
  std::vector<std::size_t> train_indices;  // into the source dataset
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;
  double test_fraction = 0.0;
};

// Per class: shuffle the member indices with the seed, the first
// round(count * test_fraction) go to test (clamped to [1, count-1]), the
// rest to train. Index lists are returned in ascending order.
SplitPair stratified_split(const LabeledDataset& ds, double test_fraction, std::uint64_t seed);

struct Fold {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

// Stratified k-fold: each class is shuffled and dealt round-robin into folds.
std::vector<Fold> stratified_kfold(const LabeledDataset& ds, std::size_t folds,
                                   std::uint64_t seed);

}  // namespace tpskit
