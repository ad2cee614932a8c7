#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tpskit/dataset.hpp"
#include "tpskit/metric.hpp"
#include "tpskit/selection.hpp"

namespace tpskit {

enum class BaselineMethod { cnn, enn, cnn_enn, allknn, kmeans, set_cover };

std::string to_string(BaselineMethod method);
BaselineMethod parse_baseline_method(const std::string& name);

struct BaselineConfig {
  BaselineMethod method = BaselineMethod::cnn_enn;
  std::size_t k_edit = 3;              // ENN neighborhood
  std::size_t k_max = 3;               // AllKNN upper k
  std::size_t clusters_per_class = 10; // kmeans
  double ball_radius = 1.0;            // set_cover
  MetricKind metric = MetricKind::euclidean;
  std::uint64_t seed = 0;

  void validate() const;
};

// Condensed nearest neighbor. Starts from one seeded random point per class
// and sweeps the remaining points in a seeded order, adding every point the
// current set misclassifies under 1-NN, until a full sweep adds nothing.
std::vector<std::size_t> cnn_select(const LabeledDataset& train, MetricKind metric,
                                    std::uint64_t seed);

// Edited nearest neighbor: drops points whose k_edit nearest neighbours
// (itself excluded, original set) vote for another label. Requires k_edit < n.
std::vector<std::size_t> enn_select(const LabeledDataset& train, std::size_t k_edit,
                                    MetricKind metric);

// CNN followed by ENN on the condensed set. A condensed set with at most
// k_edit points is returned unedited, and an edit that empties the set
// falls back to the CNN output.
std::vector<std::size_t> cnn_enn_select(const LabeledDataset& train, const BaselineConfig& cfg);

// Tomek's all-k-NN editing: a point is removed if the k-NN vote
// (k = 1..k_max, original set) disagrees with its label for any k.
std::vector<std::size_t> allknn_select(const LabeledDataset& train, std::size_t k_max,
                                       MetricKind metric);

// Per-class Lloyd's algorithm with seeded k-means++ initialisation (at most
// 100 iterations, stops when inertia improves by less than 1e-6 relative).
// Returns labelled centroids. Only the euclidean metric is supported.
LabeledDataset kmeans_select(const LabeledDataset& train, std::size_t clusters_per_class,
                             MetricKind metric, std::uint64_t seed);

// Greedy class cover with metric balls of a fixed radius: per class, pick
// the point whose ball covers the most uncovered same-class points without
// containing any other-class point; points no valid ball covers are kept
// individually.
std::vector<std::size_t> set_cover_select(const LabeledDataset& train, double ball_radius,
                                          MetricKind metric);

Selection run_baseline(const LabeledDataset& train, const BaselineConfig& cfg);

}  // namespace tpskit
