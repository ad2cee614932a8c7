#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "tpskit/dataset.hpp"
#include "tpskit/metric.hpp"
#include "tpskit/persistence.hpp"

namespace tpskit {

struct TpsConfig {
  double q = 0.05;        // neighbor-lifetime quantile in [0, 1]
  std::size_t k = 1;      // other-class neighbors summed per target point
  double tau_min = 0.001; // minimum persistence kept
  int homology_dim = 0;   // 0 or 1
  MetricKind metric = MetricKind::euclidean;
  EssentialPolicy essential_policy = EssentialPolicy::truncate;
  double rel_tol = 1e-9;  // tie tolerance for "closest to threshold"
  std::size_t max_h1_vertices = kDefaultMaxH1Vertices;

  // Throws std::invalid_argument naming the offending field and its bound.
  void validate() const;
};

// q-th quantile of the lifetimes by linear interpolation between order
// statistics: h = (n-1) q + 1, k = floor(h), gamma = h - k,
// result = (1-gamma) d_(k) + gamma d_(k+1); q = 0 and q = 1 give the
// minimum and maximum exactly.
double quant_int(std::span<const double> lifetimes, double q);

// Mean lifetime, used as the radius-filtration threshold.
double avg_int(std::span<const double> lifetimes);

// Every feature whose |lifetime - theta| is within rel_tol * max(1, |theta|)
// of the smallest gap. Ties are all kept.
std::vector<ScoredFeature> select_features(std::span<const ScoredFeature> pairs, double theta,
                                           double rel_tol);

// Vertices participating in the given features. For each feature with
// lifetime l the tolerance is eps = 0.1 l:
//   - vertices with |w_i - birth| <= eps;
//   - h = 0: both endpoints of edges whose filtration value is within eps
//     of the (truncated) death, i.e. the merging edges;
//   - h = 1: both endpoints of edges within eps of the birth (the loop).
// Returns sorted, duplicate-free local vertex indices.
std::vector<std::size_t> extract_vertices(std::span<const ScoredFeature> features,
                                          const Filtration& filtration, int homology_dim);
std::vector<std::size_t> extract_vertices(std::span<const ScoredFeature> features,
                                          std::span<const double> weights, const DistanceMatrix& d,
                                          int homology_dim);

// Local -> global index table. Composition keeps the chain from a
// restricted subproblem back to rows of the original dataset explicit.
class IndexMap {
 public:
  IndexMap() = default;
  explicit IndexMap(std::vector<std::size_t> local_to_global);

  std::size_t size() const noexcept { return table_.size(); }
  std::size_t global(std::size_t local) const;
  std::span<const std::size_t> table() const noexcept { return table_; }

  // Map for the sub-problem made of the given local indices.
  IndexMap restrict_to(std::span<const std::size_t> locals) const;
  // Global indices of the given locals, sorted ascending.
  std::vector<std::size_t> to_global(std::span<const std::size_t> locals) const;

 private:
  std::vector<std::size_t> table_;
};

struct ClassSelection {
  int label = 0;
  std::vector<std::size_t> indices;  // global, ascending
  bool fallback = false;             // no feature survived; all class members returned
  std::size_t neighbor_slice_size = 0;
};

// Intermediate results of one bps call, for diagnostics and diagram export.
struct BpsTrace {
  PersistenceDiagram neighbor_diagram;
  PersistenceDiagram radius_diagram;  // empty when the neighbor step fell back
  std::vector<std::size_t> slice;     // global indices of the neighbor slice
};

// Bifiltration prototype selection for one target class: a neighbor-weighted
// Rips filtration picks a slice of target points near the other classes
// (quantile q of lifetimes), then a radius-weighted filtration over that
// slice picks the final vertices (feature nearest the mean lifetime).
ClassSelection bps(const LabeledDataset& ds, int target_class, const TpsConfig& cfg,
                   BpsTrace* trace = nullptr);

struct PrototypeSet {
  std::map<int, std::vector<std::size_t>> per_class;
  TpsConfig config;
  double selection_time_s = 0.0;
  std::vector<int> fallback_classes;
  std::size_t source_size = 0;

  std::size_t total() const noexcept;
  std::vector<std::size_t> all_indices() const;
  double reduction_percent() const noexcept;
};

// Runs bps for every class (in parallel, merged by class id).
PrototypeSet tps(const LabeledDataset& ds, const TpsConfig& cfg);
// Same, also returning one trace per class (indexed by class id).
PrototypeSet tps(const LabeledDataset& ds, const TpsConfig& cfg, std::vector<BpsTrace>& traces);

}  // namespace tpskit
