#include "tpskit/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

namespace tpskit {

Filtration build_filtration(const DistanceMatrix& d, std::span<const double> weights,
                            int homology_dim, std::size_t max_h1_vertices) {
  const std::size_t m = d.size();
  if (m == 0) throw std::invalid_argument("build_filtration: empty distance matrix");
  if (weights.size() != m) {
    throw std::invalid_argument("build_filtration: " + std::to_string(weights.size()) +
                                " vertex weights for a " + std::to_string(m) + "-point matrix");
  }
  if (homology_dim != 0 && homology_dim != 1) {
    throw std::invalid_argument("build_filtration: homology dimension must be 0 or 1");
  }
  if (homology_dim == 1 && m > max_h1_vertices) {
    throw std::invalid_argument("build_filtration: " + std::to_string(m) +
                                " vertices exceed the h=1 limit of " +
                                std::to_string(max_h1_vertices));
  }
  if (m > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("build_filtration: too many vertices");
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("build_filtration: vertex weights must be finite and >= 0");
    }
  }

  Filtration f;
  f.homology_dim_ = homology_dim;
  f.vertex_values_.assign(weights.begin(), weights.end());
  f.vertex_order_.resize(m);
  std::iota(f.vertex_order_.begin(), f.vertex_order_.end(), std::uint32_t{0});
  std::stable_sort(f.vertex_order_.begin(), f.vertex_order_.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return f.vertex_values_[a] < f.vertex_values_[b];
                   });

  f.max_value_ = f.vertex_values_[f.vertex_order_.back()];
  f.edge_values_.resize(m * (m - 1) / 2);
  std::size_t p = 0;
  for (std::uint32_t i = 0; i < m; ++i) {
    const auto row = d.values.row(i);
    for (std::uint32_t j = i + 1; j < m; ++j) {
      const double value = std::max({row[j], weights[i], weights[j]});
      f.edge_values_[p++] = value;
      f.max_value_ = std::max(f.max_value_, value);
    }
  }

  if (homology_dim >= 1) {
    f.edges_ = f.edges();
    f.edge_rank_.assign(m * m, 0);
    for (std::size_t r = 0; r < f.edges_.size(); ++r) {
      const auto& e = f.edges_[r];
      f.edge_rank_[e.u * m + e.v] = static_cast<std::uint32_t>(r);
      f.edge_rank_[e.v * m + e.u] = static_cast<std::uint32_t>(r);
    }
  }
  return f;
}

Filtration build_filtration(const DistanceMatrix& d, const VertexWeights& weights, int homology_dim,
                            std::size_t max_h1_vertices) {
  return build_filtration(d, std::span<const double>(weights.values), homology_dim,
                          max_h1_vertices);
}

double Filtration::edge_value(std::uint32_t u, std::uint32_t v) const noexcept {
  if (u > v) std::swap(u, v);
  const std::size_t m = vertex_count();
  return edge_values_[u * (2 * m - u - 1) / 2 + (v - u - 1)];
}

std::vector<FiltrationEdge> Filtration::edges() const {
  if (!edges_.empty() || edge_values_.empty()) return edges_;
  std::vector<FiltrationEdge> out;
  out.reserve(edge_values_.size());
  for_each_edge([&](std::uint32_t u, std::uint32_t v, double value) { out.push_back({u, v, value}); });
  // Generated in lexicographic order, so a stable sort on value yields
  // (value, u, v) ordering.
  std::stable_sort(out.begin(), out.end(),
                   [](const FiltrationEdge& a, const FiltrationEdge& b) { return a.value < b.value; });
  return out;
}

std::span<const FiltrationEdge> Filtration::ranked_edges() const {
  if (homology_dim_ < 1) throw std::logic_error("Filtration::ranked_edges: built without triangles");
  return edges_;
}

std::uint32_t Filtration::edge_rank(std::uint32_t u, std::uint32_t v) const {
  if (edge_rank_.empty()) throw std::logic_error("Filtration::edge_rank: built without triangles");
  return edge_rank_[static_cast<std::size_t>(u) * vertex_count() + v];
}

void Filtration::for_each_triangle(
    const std::function<bool(const FiltrationTriangle&)>& visit) const {
  if (homology_dim_ < 1) return;
  const auto m = static_cast<std::uint32_t>(vertex_count());
  std::vector<FiltrationTriangle> group;
  std::size_t p0 = 0;
  while (p0 < edges_.size()) {
    std::size_t p1 = p0 + 1;
    while (p1 < edges_.size() && edges_[p1].value == edges_[p0].value) ++p1;
    // Triangles whose latest edge lies in [p0, p1) all share this value.
    group.clear();
    for (std::size_t p = p0; p < p1; ++p) {
      const auto& e = edges_[p];
      const std::uint32_t* rank_u = edge_rank_.data() + static_cast<std::size_t>(e.u) * m;
      const std::uint32_t* rank_v = edge_rank_.data() + static_cast<std::size_t>(e.v) * m;
      for (std::uint32_t k = 0; k < m; ++k) {
        if (k == e.u || k == e.v) continue;
        if (rank_u[k] < p && rank_v[k] < p) {
          std::uint32_t t[3] = {e.u, e.v, k};
          std::sort(t, t + 3);
          group.push_back({t[0], t[1], t[2], e.value});
        }
      }
    }
    std::sort(group.begin(), group.end(), [](const FiltrationTriangle& x, const FiltrationTriangle& y) {
      return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
    });
    for (const auto& t : group) {
      if (!visit(t)) return;
    }
    p0 = p1;
  }
}

std::vector<FiltrationTriangle> Filtration::triangles() const {
  std::vector<FiltrationTriangle> out;
  for_each_triangle([&](const FiltrationTriangle& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

std::size_t PersistenceDiagram::count(int dim) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      features.begin(), features.end(), [dim](const PersistenceFeature& f) { return f.dim == dim; }));
}

namespace {

class ElderUnionFind {
 public:
  ElderUnionFind(std::size_t n, std::span<const std::uint32_t> order) : parent_(n), oldest_(n), position_(n) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    std::iota(oldest_.begin(), oldest_.end(), std::uint32_t{0});
    for (std::size_t p = 0; p < order.size(); ++p) position_[order[p]] = static_cast<std::uint32_t>(p);
  }

  std::uint32_t find(std::uint32_t x) noexcept {
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::uint32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  // Merges the components of two distinct roots and returns the oldest
  // vertex of the component that dies.
  std::uint32_t merge(std::uint32_t ra, std::uint32_t rb) noexcept {
    if (position_[oldest_[ra]] > position_[oldest_[rb]]) std::swap(ra, rb);
    const std::uint32_t dying = oldest_[rb];
    parent_[rb] = ra;
    return dying;
  }

  std::uint32_t oldest(std::uint32_t root) const noexcept { return oldest_[root]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> oldest_;
  std::vector<std::uint32_t> position_;
};

// Symmetric difference of two ascending index lists (addition over Z/2).
void add_columns(std::vector<std::uint32_t>& target, const std::vector<std::uint32_t>& source,
                 std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

bool edge_before(const FiltrationEdge& a, const FiltrationEdge& b) noexcept {
  return std::tie(a.value, a.u, a.v) < std::tie(b.value, b.u, b.v);
}

// Minimum spanning tree under the (value, u, v) order, which is strict, so
// the tree is unique and equals the merge edges of a Kruskal pass. Returned
// in filtration order.
std::vector<FiltrationEdge> spanning_tree(const Filtration& f) {
  const auto m = static_cast<std::uint32_t>(f.vertex_count());
  std::vector<FiltrationEdge> tree;
  if (m < 2) return tree;
  tree.reserve(m - 1);
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<FiltrationEdge> best(m, FiltrationEdge{kNone, kNone, kInfinity});
  std::vector<char> in_tree(m, 0);
  std::uint32_t current = 0;
  in_tree[0] = 1;
  for (std::uint32_t step = 1; step < m; ++step) {
    std::uint32_t next = kNone;
    for (std::uint32_t v = 0; v < m; ++v) {
      if (in_tree[v]) continue;
      const FiltrationEdge candidate{std::min(current, v), std::max(current, v), f.edge_value(current, v)};
      if (best[v].u == kNone || edge_before(candidate, best[v])) best[v] = candidate;
      if (next == kNone || edge_before(best[v], best[next])) next = v;
    }
    in_tree[next] = 1;
    tree.push_back(best[next]);
    current = next;
  }
  std::sort(tree.begin(), tree.end(), edge_before);
  return tree;
}

}  // namespace

PersistenceDiagram compute_persistence(const Filtration& filtration) {
  PersistenceDiagram diagram;
  diagram.max_filtration = filtration.max_value();
  diagram.homology_dim = filtration.homology_dim();

  const std::size_t m = filtration.vertex_count();
  const auto weights = filtration.vertex_values();
  ElderUnionFind uf(m, filtration.vertex_order());

  std::vector<bool> positive;
  std::size_t positive_count = 0;
  if (filtration.homology_dim() >= 1) {
    // Full Kruskal pass: edges that close a cycle are the positive ones.
    const auto edges = filtration.ranked_edges();
    positive.assign(edges.size(), false);
    for (std::size_t p = 0; p < edges.size(); ++p) {
      const auto& e = edges[p];
      const std::uint32_t ru = uf.find(e.u);
      const std::uint32_t rv = uf.find(e.v);
      if (ru == rv) {
        positive[p] = true;
        ++positive_count;
        continue;
      }
      diagram.features.push_back({0, weights[uf.merge(ru, rv)], e.value});
    }
  } else {
    for (const auto& e : spanning_tree(filtration)) {
      const std::uint32_t dying = uf.merge(uf.find(e.u), uf.find(e.v));
      diagram.features.push_back({0, weights[dying], e.value});
    }
  }
  for (std::uint32_t v : filtration.vertex_order()) {
    if (uf.oldest(uf.find(v)) == v) diagram.features.push_back({0, weights[v], kInfinity});
  }

  if (filtration.homology_dim() < 1 || positive_count == 0) return diagram;

  const auto edges = filtration.ranked_edges();
  std::vector<std::int64_t> pivot_owner(edges.size(), -1);
  std::vector<std::vector<std::uint32_t>> reduced;
  std::vector<std::uint32_t> column, scratch;
  std::size_t paired = 0;
  filtration.for_each_triangle([&](const FiltrationTriangle& t) {
    column = {filtration.edge_rank(t.a, t.b), filtration.edge_rank(t.a, t.c),
              filtration.edge_rank(t.b, t.c)};
    std::sort(column.begin(), column.end());
    while (!column.empty()) {
      const std::int64_t owner = pivot_owner[column.back()];
      if (owner < 0) break;
      add_columns(column, reduced[static_cast<std::size_t>(owner)], scratch);
    }
    if (column.empty()) return true;  // creates a 2-cycle, outside the computed range
    const std::uint32_t pivot = column.back();
    pivot_owner[pivot] = static_cast<std::int64_t>(reduced.size());
    reduced.push_back(column);
    diagram.features.push_back({1, edges[pivot].value, t.value});
    // Every 1-cycle has been killed once each positive edge owns a column.
    return ++paired < positive_count;
  });
  for (std::size_t p = 0; p < edges.size(); ++p) {
    if (positive[p] && pivot_owner[p] < 0) diagram.features.push_back({1, edges[p].value, kInfinity});
  }
  return diagram;
}

std::vector<ScoredFeature> truncated_lifetimes(const PersistenceDiagram& diagram, double tau_min,
                                               EssentialPolicy policy) {
  std::vector<ScoredFeature> out;
  for (std::size_t i = 0; i < diagram.features.size(); ++i) {
    const auto& f = diagram.features[i];
    if (f.essential() && policy == EssentialPolicy::drop) continue;
    const double death = std::min(f.death, diagram.max_filtration);
    const double lifetime = death - f.birth;
    if (lifetime >= tau_min) out.push_back({f, i, death, lifetime});
  }
  return out;
}

}  // namespace tpskit
