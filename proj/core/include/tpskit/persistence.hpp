#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "tpskit/metric.hpp"

namespace tpskit {

// Largest vertex count accepted when triangles are needed (h = 1). The
// triangle count grows as m^3 / 6.
inline constexpr std::size_t kDefaultMaxH1Vertices = 600;

struct FiltrationEdge {
  std::uint32_t u;  // u < v
  std::uint32_t v;
  double value;
};

struct FiltrationTriangle {
  std::uint32_t a;  // a < b < c
  std::uint32_t b;
  std::uint32_t c;
  double value;
};

// Vertex-weighted Vietoris-Rips filtration: vertex i enters at w_i, edge
// (i, j) at max(D_ij, w_i, w_j), triangle at the max of its three edges.
// Simplices are ordered by (value, dimension, lexicographic vertex tuple).
//
// Edge values are kept in a packed upper triangle. The sorted edge list and
// the rank table exist only for h = 1; triangles are never stored but
// generated in filtration order, which keeps memory at O(m^2).
class Filtration {
 public:
  std::size_t vertex_count() const noexcept { return vertex_values_.size(); }
  int homology_dim() const noexcept { return homology_dim_; }
  double max_value() const noexcept { return max_value_; }
  std::span<const double> vertex_values() const noexcept { return vertex_values_; }
  // Vertex indices sorted by (value, index).
  std::span<const std::uint32_t> vertex_order() const noexcept { return vertex_order_; }

  std::size_t edge_count() const noexcept { return edge_values_.size(); }
  // Value of edge {u, v}, u != v.
  double edge_value(std::uint32_t u, std::uint32_t v) const noexcept;
  // Calls visit(u, v, value) for every edge, u < v, in lexicographic order.
  template <class F>
  void for_each_edge(F&& visit) const {
    const auto m = static_cast<std::uint32_t>(vertex_count());
    std::size_t p = 0;
    for (std::uint32_t u = 0; u < m; ++u) {
      for (std::uint32_t v = u + 1; v < m; ++v) visit(u, v, edge_values_[p++]);
    }
  }
  // All edges in filtration order (a copy; sorted on demand when h = 0).
  std::vector<FiltrationEdge> edges() const;

  // Sorted edges and ranks; only available when homology_dim() >= 1.
  std::span<const FiltrationEdge> ranked_edges() const;
  std::uint32_t edge_rank(std::uint32_t u, std::uint32_t v) const;
  // Visits triangles in filtration order; stops early when visit returns false.
  // No-op when homology_dim() == 0.
  void for_each_triangle(const std::function<bool(const FiltrationTriangle&)>& visit) const;
  // Materialised triangle list; intended for small complexes and tests.
  std::vector<FiltrationTriangle> triangles() const;

 private:
  friend Filtration build_filtration(const DistanceMatrix&, std::span<const double>, int,
                                     std::size_t);
  int homology_dim_ = 0;
  double max_value_ = 0.0;
  std::vector<double> vertex_values_;
  std::vector<std::uint32_t> vertex_order_;
  std::vector<double> edge_values_;       // packed upper triangle, row-major
  std::vector<FiltrationEdge> edges_;     // sorted, only for homology_dim >= 1
  std::vector<std::uint32_t> edge_rank_;  // m x m, only for homology_dim >= 1
};

// Throws on size mismatch, homology_dim outside {0, 1}, negative or
// non-finite weights, or (for h = 1) more than max_h1_vertices vertices.
Filtration build_filtration(const DistanceMatrix& d, std::span<const double> weights,
                            int homology_dim, std::size_t max_h1_vertices = kDefaultMaxH1Vertices);
Filtration build_filtration(const DistanceMatrix& d, const VertexWeights& weights, int homology_dim,
                            std::size_t max_h1_vertices = kDefaultMaxH1Vertices);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistenceFeature {
  int dim = 0;
  double birth = 0.0;
  double death = kInfinity;

  bool essential() const noexcept { return death == kInfinity; }
  friend bool operator==(const PersistenceFeature&, const PersistenceFeature&) = default;
};

struct PersistenceDiagram {
  std::vector<PersistenceFeature> features;
  double max_filtration = 0.0;
  int homology_dim = 0;

  std::size_t count(int dim) const noexcept;
};

// H0 by union-find with the elder rule: when two components merge, the one
// whose oldest vertex comes later in the filtration order dies. Merges only
// happen on minimum spanning tree edges, so for h = 0 the tree is found with
// an O(m^2) Prim pass under the same total order instead of sorting every
// edge. H1 (when the
// filtration has h = 1) by Z/2 reduction of the triangle boundary columns.
// Edge columns are never reduced: H0 comes from union-find, and an edge that
// is the pivot of a reduced triangle column is cleared (it is positive).
// Zero-length pairs are reported, so dim-0 features number exactly m.
PersistenceDiagram compute_persistence(const Filtration& filtration);

enum class EssentialPolicy { truncate, drop };

struct ScoredFeature {
  PersistenceFeature feature;
  std::size_t index = 0;  // position in PersistenceDiagram::features
  double death = 0.0;     // min(death, max_filtration)
  double lifetime = 0.0;  // death - birth
};

// lifetime = min(death, max_filtration) - birth. Features with
// lifetime < tau_min are removed; with EssentialPolicy::drop, essential
// features are removed as well.
std::vector<ScoredFeature> truncated_lifetimes(const PersistenceDiagram& diagram, double tau_min,
                                               EssentialPolicy policy = EssentialPolicy::truncate);

}  // namespace tpskit
