#include "tpskit/metric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tpskit {

std::string to_string(MetricKind metric) {
  switch (metric) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::manhattan: return "manhattan";
    case MetricKind::cosine: return "cosine";
  }
  return "unknown";
}

MetricKind parse_metric(const std::string& name) {
  if (name == "euclidean") return MetricKind::euclidean;
  if (name == "manhattan") return MetricKind::manhattan;
  if (name == "cosine") return MetricKind::cosine;
  throw std::invalid_argument("unknown metric '" + name + "' (expected euclidean, manhattan, cosine)");
}

double distance(std::span<const double> a, std::span<const double> b, MetricKind metric) noexcept {
  const std::size_t d = std::min(a.size(), b.size());
  switch (metric) {
    case MetricKind::euclidean: {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double t = a[k] - b[k];
        s += t * t;
      }
      return std::sqrt(s);
    }
    case MetricKind::manhattan: {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += std::abs(a[k] - b[k]);
      return s;
    }
    case MetricKind::cosine: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
      }
      const double sim = dot / (std::sqrt(na) * std::sqrt(nb));
      return std::clamp(1.0 - sim, 0.0, 2.0);
    }
  }
  return 0.0;
}

namespace {

void check_rows(const Matrix& points, MetricKind metric, const char* who) {
  for (std::size_t r = 0; r < points.rows(); ++r) {
    double norm = 0.0;
    for (double v : points.row(r)) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(who) + ": non-finite coordinate in row " +
                                    std::to_string(r));
      }
      norm += v * v;
    }
    if (metric == MetricKind::cosine && norm == 0.0) {
      throw std::invalid_argument(std::string(who) + ": row " + std::to_string(r) +
                                  " has zero norm; cosine distance is undefined");
    }
  }
}

}  // namespace

DistanceMatrix pairwise_distances(const Matrix& points, MetricKind metric) {
  check_rows(points, metric, "pairwise_distances");
  const std::size_t n = points.rows();
  DistanceMatrix out{Matrix(n, n, 0.0), metric};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = distance(points.row(i), points.row(j), metric);
      out.values(i, j) = v;
      out.values(j, i) = v;
    }
  }
  return out;
}

Matrix cross_distances(const Matrix& target, const Matrix& other, MetricKind metric) {
  if (other.rows() == 0) throw std::invalid_argument("cross_distances: the other set is empty");
  if (target.cols() != other.cols()) {
    throw std::invalid_argument("cross_distances: dimension mismatch");
  }
  check_rows(target, metric, "cross_distances");
  check_rows(other, metric, "cross_distances");
  Matrix out(target.rows(), other.rows());
  for (std::size_t i = 0; i < target.rows(); ++i) {
    for (std::size_t j = 0; j < other.rows(); ++j) {
      out(i, j) = distance(target.row(i), other.row(j), metric);
    }
  }
  return out;
}

VertexWeights neighbor_weights(const Matrix& cross, std::size_t k) {
  if (k < 1) throw std::invalid_argument("neighbor_weights: K must be >= 1");
  if (k > cross.cols()) {
    throw std::invalid_argument("neighbor_weights: K=" + std::to_string(k) + " exceeds the " +
                                std::to_string(cross.cols()) + " available other-class points");
  }
  VertexWeights w{std::vector<double>(cross.rows()), VertexWeights::Kind::neighbor};
  std::vector<double> row;
  for (std::size_t i = 0; i < cross.rows(); ++i) {
    auto src = cross.row(i);
    row.assign(src.begin(), src.end());
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
    CompensatedSum sum;
    for (std::size_t j = 0; j < k; ++j) sum.add(row[j]);
    w.values[i] = sum.value();
  }
  return w;
}

VertexWeights radius_weights(const DistanceMatrix& d) {
  const std::size_t m = d.size();
  if (m == 0) throw std::invalid_argument("radius_weights: empty distance matrix");
  VertexWeights w{std::vector<double>(m), VertexWeights::Kind::radius};
  for (std::size_t i = 0; i < m; ++i) {
    CompensatedSum sum;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) sum.add(d(i, j));
    }
    w.values[i] = sum.value();
  }
  return w;
}

DistanceMatrix DistanceMatrix::restrict_to(std::span<const std::size_t> indices) const {
  return {values.select_square(indices), metric};
}

VertexWeights VertexWeights::restrict_to(std::span<const std::size_t> indices) const {
  VertexWeights out{{}, kind};
  out.values.reserve(indices.size());
  for (auto i : indices) out.values.push_back(values.at(i));
  return out;
}

}  // namespace tpskit
