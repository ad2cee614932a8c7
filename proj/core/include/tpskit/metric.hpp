#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tpskit/matrix.hpp"

namespace tpskit {

enum class MetricKind { euclidean, manhattan, cosine };

std::string to_string(MetricKind metric);
MetricKind parse_metric(const std::string& name);

// Cosine distance is 1 - cos(angle), clamped to [0, 2].
double distance(std::span<const double> a, std::span<const double> b, MetricKind metric) noexcept;

// Symmetric, zero diagonal, nonnegative and finite.
struct DistanceMatrix {
  Matrix values;
  MetricKind metric = MetricKind::euclidean;

  std::size_t size() const noexcept { return values.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values(i, j); }

  DistanceMatrix restrict_to(std::span<const std::size_t> indices) const;
};

struct VertexWeights {
  enum class Kind { neighbor, radius };
  std::vector<double> values;
  Kind kind = Kind::neighbor;

  std::size_t size() const noexcept { return values.size(); }
  VertexWeights restrict_to(std::span<const std::size_t> indices) const;
};

// Throws if any row is non-finite, or has zero norm under cosine.
DistanceMatrix pairwise_distances(const Matrix& points, MetricKind metric);

// m x p matrix of distances from each target row to each other row.
Matrix cross_distances(const Matrix& target, const Matrix& other, MetricKind metric);

// n_i = sum of the K smallest entries of cross row i (summed in ascending
// order). K must satisfy 1 <= K <= cross.cols().
VertexWeights neighbor_weights(const Matrix& cross, std::size_t k);

// r_i = sum over j != i of D(i, j), accumulated in index order.
VertexWeights radius_weights(const DistanceMatrix& d);

}  // namespace tpskit
