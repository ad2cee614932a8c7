#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "tpskit/matrix.hpp"
#include "tpskit/metric.hpp"

namespace tpskit {

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

// Indices of the k smallest entries of a distance row, ordered by
// (distance, index). `skip` is excluded (pass the query's own index).
std::vector<std::size_t> nearest_in_row(std::span<const double> distances, std::size_t k,
                                        std::size_t skip = kNoIndex);

// k nearest rows of `reference` to `query` with the same ordering.
std::vector<std::size_t> nearest_neighbors(const Matrix& reference, std::span<const double> query,
                                           std::size_t k, MetricKind metric,
                                           std::size_t skip = kNoIndex);

// Most frequent label among the neighbors; ties go to the smallest label.
int majority_label(std::span<const std::size_t> neighbors, std::span<const int> labels);

}  // namespace tpskit
