#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tpskit/baselines.hpp"
#include "tpskit/dataset.hpp"
#include "tpskit/selection.hpp"
#include "tpskit/tps.hpp"

namespace tpskit {

// Majority vote among the k nearest training points. Distance ties go to
// the lower training index, vote ties to the smaller class id.
std::vector<int> knn_predict(const LabeledDataset& train, std::size_t k, const Matrix& queries,
                             MetricKind metric);

// Geometric mean of per-class recall over the classes present in y_true.
double g_mean(std::span<const int> y_true, std::span<const int> y_pred);

using SelectorConfig = std::variant<TpsConfig, BaselineConfig>;
using Selector = std::function<Selection(const LabeledDataset&)>;

std::string selector_name(const SelectorConfig& cfg);
// Human-readable parameter tuple, e.g. "(0.15, 3, 0.001)" for TPS.
std::string describe(const SelectorConfig& cfg);
MetricKind selector_metric(const SelectorConfig& cfg);
Selection run_selector(const LabeledDataset& train, const SelectorConfig& cfg);

struct EvalReport {
  std::string model = "knn";
  std::size_t model_k = 1;
  double baseline_gmean = 0.0;
  double prototype_gmean = 0.0;
  double delta_gmean = 0.0;  // prototype - baseline, absolute
  std::size_t prototype_count = 0;
  std::size_t train_size = 0;
  double reduction_percent = 0.0;  // 100 (1 - prototype_count / train_size)
  std::vector<std::size_t> per_class_counts;
  double selection_time_s = 0.0;
  bool synthetic = false;
  std::vector<int> fallback_classes;
  std::string config;

  double delta_gmean_percent() const noexcept { return 100.0 * delta_gmean; }
};

// Fits k-NN on the full training split and on the selected prototypes and
// scores both on the test split with G-Mean.
EvalReport evaluate(const SplitPair& split, const Selector& selector, std::size_t model_k,
                    MetricKind metric);

struct SweepEntry {
  SelectorConfig config;
  std::optional<EvalReport> report;
  std::string error;  // set when the configuration could not be evaluated
};

struct SweepResult {
  std::size_t model_k = 1;
  std::vector<SweepEntry> grid;
  std::optional<std::size_t> winner;
};

// Winner: the largest delta_gmean among evaluated entries whose reduction is
// at least min_reduction percent; ties go to the larger reduction, then the
// earlier grid position.
std::optional<std::size_t> pick_winner(std::span<const SweepEntry> grid, double min_reduction = 0.0);

SweepResult sweep(const SplitPair& split, const std::vector<SelectorConfig>& grid,
                  std::size_t model_k, double min_reduction = 0.0);

// One selection per configuration, scored under every model size. Grid
// points run concurrently; results are stored by grid position.
std::vector<SweepResult> sweep_models(const SplitPair& split, const std::vector<SelectorConfig>& grid,
                                      std::span<const std::size_t> model_ks,
                                      double min_reduction = 0.0);

// Stratified k-fold evaluation of a single configuration.
std::vector<EvalReport> cross_validate(const LabeledDataset& ds, const SelectorConfig& cfg,
                                       std::size_t folds, std::size_t model_k, std::uint64_t seed);

struct TimingStats {
  std::size_t iterations = 0;
  double mean_s = 0.0;
  double se_s = 0.0;
  double ci_lower_s = 0.0;  // mean - 1.96 SE
  double ci_upper_s = 0.0;  // mean + 1.96 SE
  std::vector<double> samples_s;
};

// Wall-clock time of tps() on a monotonic clock. One warm-up run is
// discarded; iterations must be >= 2.
TimingStats time_selection(const LabeledDataset& ds, const TpsConfig& cfg, std::size_t iterations);
TimingStats summarize_timings(std::vector<double> samples_s);

// The grids used by the benchmark harness.
std::vector<TpsConfig> tps_grid(std::span<const double> qs, std::span<const std::size_t> ks,
                                std::span<const double> taus, const TpsConfig& base = {});

}  // namespace tpskit
