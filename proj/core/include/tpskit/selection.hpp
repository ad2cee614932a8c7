#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tpskit/dataset.hpp"

namespace tpskit {

// Output of any prototype selector. Selectors that keep training rows fill
// `indices`; generators such as k-means fill `synthetic` instead.
struct Selection {
  std::vector<std::size_t> indices;
  std::optional<LabeledDataset> synthetic;
  std::vector<int> fallback_classes;
  double selection_time_s = 0.0;

  std::size_t count() const noexcept { return synthetic ? synthetic->size() : indices.size(); }
  LabeledDataset materialize(const LabeledDataset& train) const {
    return synthetic ? *synthetic : train.subset(indices);
  }
};

}  // namespace tpskit
