#include "tpskit/tps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tpskit/parallel.hpp"

namespace tpskit {

void TpsConfig::validate() const {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("q must lie in [0, 1] (got " + std::to_string(q) + ")");
  }
  if (k < 1) throw std::invalid_argument("K must be >= 1");
  if (!(tau_min >= 0.0) || !std::isfinite(tau_min)) {
    throw std::invalid_argument("tau_min must be >= 0 (got " + std::to_string(tau_min) + ")");
  }
  if (homology_dim != 0 && homology_dim != 1) {
    throw std::invalid_argument("homology dimension h must be 0 or 1 (got " +
                                std::to_string(homology_dim) + ")");
  }
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");
}

double quant_int(std::span<const double> lifetimes, double q) {
  if (lifetimes.empty()) throw std::invalid_argument("quant_int: empty lifetime list");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quant_int: q must lie in [0, 1]");
  std::vector<double> sorted(lifetimes.begin(), lifetimes.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (q == 0.0) return sorted.front();
  if (q == 1.0) return sorted.back();
  const double h = static_cast<double>(n - 1) * q + 1.0;
  const auto k = static_cast<std::size_t>(std::floor(h));
  const double gamma = h - static_cast<double>(k);
  // 1-based order statistics d_(k) and d_(k+1).
  if (gamma == 0.0 || k >= n) return sorted[k - 1];
  return (1.0 - gamma) * sorted[k - 1] + gamma * sorted[k];
}

double avg_int(std::span<const double> lifetimes) {
  if (lifetimes.empty()) throw std::invalid_argument("avg_int: empty lifetime list");
  CompensatedSum sum;
  for (double l : lifetimes) sum.add(l);
  return sum.value() / static_cast<double>(lifetimes.size());
}

std::vector<ScoredFeature> select_features(std::span<const ScoredFeature> pairs, double theta,
                                           double rel_tol) {
  if (pairs.empty()) throw std::invalid_argument("select_features: no candidate features");
  double best = std::abs(pairs.front().lifetime - theta);
  for (const auto& p : pairs) best = std::min(best, std::abs(p.lifetime - theta));
  const double slack = rel_tol * std::max(1.0, std::abs(theta));
  std::vector<ScoredFeature> out;
  for (const auto& p : pairs) {
    if (std::abs(p.lifetime - theta) <= best + slack) out.push_back(p);
  }
  return out;
}

namespace {

// Marks both endpoints of every edge with |value - target| <= eps.
void mark_edges_near(const Filtration& filtration, double target, double eps, std::vector<char>& marks) {
  filtration.for_each_edge([&](std::uint32_t u, std::uint32_t v, double value) {
    if (std::abs(value - target) <= eps) {
      marks[u] = 1;
      marks[v] = 1;
    }
  });
}

void mark_vertices_near(std::span<const double> weights, std::span<const std::uint32_t> order,
                        double target, double eps, std::vector<char>& marks) {
  const double pad = 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(target) + eps + 1.0);
  auto it = std::lower_bound(order.begin(), order.end(), target - eps - pad,
                             [&](std::uint32_t v, double x) { return weights[v] < x; });
  for (; it != order.end() && weights[*it] <= target + eps + pad; ++it) {
    if (std::abs(weights[*it] - target) <= eps) marks[*it] = 1;
  }
}

}  // namespace

std::vector<std::size_t> extract_vertices(std::span<const ScoredFeature> features,
                                          const Filtration& filtration, int homology_dim) {
  const auto weights = filtration.vertex_values();
  const auto order = filtration.vertex_order();
  std::vector<char> marks(filtration.vertex_count(), 0);
  for (const auto& f : features) {
    const double eps_birth = 0.1 * f.lifetime;
    const double eps_death = 0.1 * f.lifetime;
    const double birth = f.feature.birth;
    mark_vertices_near(weights, order, birth, eps_birth, marks);
    if (homology_dim == 0) {
      mark_edges_near(filtration, f.death, eps_death, marks);
    } else if (homology_dim == 1) {
      mark_edges_near(filtration, birth, eps_birth, marks);
    }
    // Higher dimensions: birth-matched vertices only.
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (marks[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> extract_vertices(std::span<const ScoredFeature> features,
                                          std::span<const double> weights, const DistanceMatrix& d,
                                          int homology_dim) {
  const auto filtration = build_filtration(d, weights, 0);
  return extract_vertices(features, filtration, homology_dim);
}

IndexMap::IndexMap(std::vector<std::size_t> local_to_global) : table_(std::move(local_to_global)) {}

std::size_t IndexMap::global(std::size_t local) const {
  if (local >= table_.size()) {
    throw std::out_of_range("IndexMap: local index " + std::to_string(local) + " out of range (size " +
                            std::to_string(table_.size()) + ")");
  }
  return table_[local];
}

IndexMap IndexMap::restrict_to(std::span<const std::size_t> locals) const {
  std::vector<std::size_t> table;
  table.reserve(locals.size());
  for (auto l : locals) table.push_back(global(l));
  return IndexMap(std::move(table));
}

std::vector<std::size_t> IndexMap::to_global(std::span<const std::size_t> locals) const {
  std::vector<std::size_t> out;
  out.reserve(locals.size());
  for (auto l : locals) out.push_back(global(l));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::vector<double> lifetimes_of(std::span<const ScoredFeature> features) {
  std::vector<double> out;
  out.reserve(features.size());
  for (const auto& f : features) out.push_back(f.lifetime);
  return out;
}

}  // namespace

ClassSelection bps(const LabeledDataset& ds, int target_class, const TpsConfig& cfg,
                   BpsTrace* trace) {
  cfg.validate();
  ClassSelection result;
  result.label = target_class;

  std::vector<std::size_t> target, other;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    (ds.labels[i] == target_class ? target : other).push_back(i);
  }
  if (target.empty()) {
    throw std::invalid_argument("bps: target class " + std::to_string(target_class) + " is empty");
  }
  if (other.empty()) throw std::invalid_argument("bps: no points outside the target class");
  if (cfg.k > other.size()) {
    throw std::invalid_argument("bps: K=" + std::to_string(cfg.k) + " exceeds the " +
                                std::to_string(other.size()) + " points outside class " +
                                std::to_string(target_class));
  }

  const IndexMap target_map(target);
  const Matrix target_points = ds.points.select_rows(target);
  const DistanceMatrix d = pairwise_distances(target_points, cfg.metric);
  const VertexWeights radius = radius_weights(d);
  const VertexWeights neighbor =
      neighbor_weights(cross_distances(target_points, ds.points.select_rows(other), cfg.metric), cfg.k);

  auto fall_back = [&] {
    result.indices = target;
    result.fallback = true;
    return result;
  };

  // Neighbor filtration: slice at the q-quantile lifetime.
  const Filtration neighbor_filtration = build_filtration(d, neighbor, cfg.homology_dim, cfg.max_h1_vertices);
  const auto neighbor_diagram = compute_persistence(neighbor_filtration);
  if (trace) trace->neighbor_diagram = neighbor_diagram;
  const auto neighbor_features = truncated_lifetimes(neighbor_diagram, cfg.tau_min, cfg.essential_policy);
  if (neighbor_features.empty()) return fall_back();
  const double neighbor_theta = quant_int(lifetimes_of(neighbor_features), cfg.q);
  const auto neighbor_selected = select_features(neighbor_features, neighbor_theta, cfg.rel_tol);
  const auto slice = extract_vertices(neighbor_selected, neighbor_filtration, cfg.homology_dim);
  if (slice.empty()) return fall_back();
  result.neighbor_slice_size = slice.size();

  // Radius filtration restricted to the slice: feature nearest the mean lifetime.
  const IndexMap slice_map = target_map.restrict_to(slice);
  if (trace) trace->slice = target_map.to_global(slice);
  const DistanceMatrix slice_d = d.restrict_to(slice);
  const VertexWeights slice_radius = radius.restrict_to(slice);
  const Filtration radius_filtration =
      build_filtration(slice_d, slice_radius, cfg.homology_dim, cfg.max_h1_vertices);
  const auto radius_diagram = compute_persistence(radius_filtration);
  if (trace) trace->radius_diagram = radius_diagram;
  const auto radius_features = truncated_lifetimes(radius_diagram, cfg.tau_min, cfg.essential_policy);
  if (radius_features.empty()) return fall_back();
  const double radius_theta = avg_int(lifetimes_of(radius_features));
  const auto radius_selected = select_features(radius_features, radius_theta, cfg.rel_tol);
  const auto chosen = extract_vertices(radius_selected, radius_filtration, cfg.homology_dim);
  if (chosen.empty()) return fall_back();

  result.indices = slice_map.to_global(chosen);
  return result;
}

std::size_t PrototypeSet::total() const noexcept {
  std::size_t n = 0;
  for (const auto& [label, idx] : per_class) n += idx.size();
  return n;
}

std::vector<std::size_t> PrototypeSet::all_indices() const {
  std::vector<std::size_t> out;
  for (const auto& [label, idx] : per_class) out.insert(out.end(), idx.begin(), idx.end());
  std::sort(out.begin(), out.end());
  return out;
}

double PrototypeSet::reduction_percent() const noexcept {
  if (source_size == 0) return 0.0;
  return 100.0 * (1.0 - static_cast<double>(total()) / static_cast<double>(source_size));
}

namespace {

PrototypeSet run_tps(const LabeledDataset& ds, const TpsConfig& cfg, std::vector<BpsTrace>* traces) {
  cfg.validate();
  ds.validate();
  const int classes = ds.num_classes();
  if (classes < 2) throw std::invalid_argument("tps: dataset needs at least two classes");

  const auto start = std::chrono::steady_clock::now();
  std::vector<ClassSelection> selections(static_cast<std::size_t>(classes));
  if (traces) traces->assign(selections.size(), BpsTrace{});
  parallel_for(selections.size(), [&](std::size_t c) {
    selections[c] = bps(ds, static_cast<int>(c), cfg, traces ? &(*traces)[c] : nullptr);
  });
  const auto stop = std::chrono::steady_clock::now();

  PrototypeSet out;
  out.config = cfg;
  out.source_size = ds.size();
  out.selection_time_s = std::chrono::duration<double>(stop - start).count();
  for (auto& s : selections) {
    if (s.fallback) out.fallback_classes.push_back(s.label);
    out.per_class[s.label] = std::move(s.indices);
  }
  return out;
}

}  // namespace

PrototypeSet tps(const LabeledDataset& ds, const TpsConfig& cfg) {
  return run_tps(ds, cfg, nullptr);
}

PrototypeSet tps(const LabeledDataset& ds, const TpsConfig& cfg, std::vector<BpsTrace>& traces) {
  return run_tps(ds, cfg, &traces);
}

}  // namespace tpskit
