#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tpskit/dataset.hpp"

namespace tpskit {

// Named generator recipes for the benchmark datasets. Fields left at zero
// take the recipe's default.
struct GeneratorSpec {
  std::string kind;          // see dataset_kinds()
  std::size_t n = 0;         // total points
  double noise = -1.0;       // moons/circles sigma; negative = moderate preset
  std::size_t dim = 0;       // hypercube
  double side = 0.0;         // hypercube
  double sigma = 0.0;        // blobs and hypercube
  double ratio = 0.0;        // hypercube imbalance
  double factor = 0.0;       // circles inner radius
  std::uint64_t seed = 0;
};

// moons, circles, well-separated, overlapping-blobs, overlapping-clusters,
// imbalanced, mixed, hypercube.
const std::vector<std::string>& dataset_kinds();

// Fills in defaults; throws std::invalid_argument for an unknown kind.
GeneratorSpec resolve(GeneratorSpec spec);

LabeledDataset make_dataset(const GeneratorSpec& spec);

}  // namespace tpskit
