#include "tpskit/neighbors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace tpskit {

std::vector<std::size_t> nearest_in_row(std::span<const double> distances, std::size_t k,
                                        std::size_t skip) {
  std::vector<std::size_t> idx;
  idx.reserve(distances.size());
  for (std::size_t j = 0; j < distances.size(); ++j) {
    if (j != skip) idx.push_back(j);
  }
  if (k > idx.size()) {
    throw std::invalid_argument("nearest_in_row: k=" + std::to_string(k) + " exceeds " +
                                std::to_string(idx.size()) + " candidates");
  }
  auto closer = [&](std::size_t a, std::size_t b) {
    return distances[a] < distances[b] || (distances[a] == distances[b] && a < b);
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), closer);
  idx.resize(k);
  return idx;
}

std::vector<std::size_t> nearest_neighbors(const Matrix& reference, std::span<const double> query,
                                           std::size_t k, MetricKind metric, std::size_t skip) {
  std::vector<double> row(reference.rows());
  for (std::size_t j = 0; j < reference.rows(); ++j) row[j] = distance(reference.row(j), query, metric);
  return nearest_in_row(row, k, skip);
}

int majority_label(std::span<const std::size_t> neighbors, std::span<const int> labels) {
  if (neighbors.empty()) throw std::invalid_argument("majority_label: no neighbors");
  std::map<int, std::size_t> votes;
  for (auto j : neighbors) ++votes[labels[j]];
  int best = votes.begin()->first;
  std::size_t best_count = 0;
  for (const auto& [label, count] : votes) {
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

}  // namespace tpskit
