#pragma once

#include <cstdint>
#include <vector>

#include "tpskit/dataset.hpp"
#include "tpskit/matrix.hpp"
#include "tpskit/rng.hpp"

namespace testutil {

inline tpskit::Matrix random_points(std::size_t n, std::size_t d, std::uint64_t seed, double scale = 1.0) {
  tpskit::Rng rng(seed);
  tpskit::Matrix m(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) m(i, c) = scale * rng.uniform();
  }
  return m;
}

inline std::vector<std::vector<double>> to_rows(const tpskit::Matrix& m) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) rows.emplace_back(m.row(i).begin(), m.row(i).end());
  return rows;
}

// Two Gaussian blobs in the plane, `per_class` points each.
inline tpskit::LabeledDataset two_blobs(std::size_t per_class, double separation, std::uint64_t seed) {
  return tpskit::make_blobs({per_class, per_class}, {{0.0, 0.0}, {separation, 0.0}}, 1.0, seed);
}

}  // namespace testutil
