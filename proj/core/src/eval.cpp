#include "tpskit/eval.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "tpskit/neighbors.hpp"
#include "tpskit/parallel.hpp"

namespace tpskit {

std::vector<int> knn_predict(const LabeledDataset& train, std::size_t k, const Matrix& queries,
                             MetricKind metric) {
  if (k < 1 || k > train.size()) {
    throw std::invalid_argument("knn_predict: k=" + std::to_string(k) + " must be in [1, " +
                                std::to_string(train.size()) + "]");
  }
  if (queries.rows() > 0 && queries.cols() != train.dim()) {
    throw std::invalid_argument("knn_predict: query dimension does not match training data");
  }
  std::vector<int> out(queries.rows());
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    const auto nn = nearest_neighbors(train.points, queries.row(q), k, metric);
    out[q] = majority_label(nn, train.labels);
  }
  return out;
}

double g_mean(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw std::invalid_argument("g_mean: " + std::to_string(y_true.size()) + " true labels but " +
                                std::to_string(y_pred.size()) + " predictions");
  }
  if (y_true.empty()) throw std::invalid_argument("g_mean: empty label vectors");
  int classes = 0;
  for (int y : y_true) classes = std::max(classes, y + 1);
  std::vector<std::size_t> support(static_cast<std::size_t>(classes), 0);
  std::vector<std::size_t> hits(static_cast<std::size_t>(classes), 0);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const auto c = static_cast<std::size_t>(y_true[i]);
    ++support[c];
    if (y_pred[i] == y_true[i]) ++hits[c];
  }
  double log_sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < support.size(); ++c) {
    if (support[c] == 0) continue;
    if (hits[c] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(hits[c]) / static_cast<double>(support[c]));
    ++present;
  }
  if (log_sum == 0.0) return 1.0;
  return std::exp(log_sum / static_cast<double>(present));
}

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string selector_name(const SelectorConfig& cfg) {
  if (std::holds_alternative<TpsConfig>(cfg)) return "tps";
  return to_string(std::get<BaselineConfig>(cfg).method);
}

std::string describe(const SelectorConfig& cfg) {
  if (const auto* t = std::get_if<TpsConfig>(&cfg)) {
    return "(" + format_number(t->q) + ", " + std::to_string(t->k) + ", " + format_number(t->tau_min) +
           ")";
  }
  const auto& b = std::get<BaselineConfig>(cfg);
  switch (b.method) {
    case BaselineMethod::cnn: return "(seed=" + std::to_string(b.seed) + ")";
    case BaselineMethod::enn: return "(k_edit=" + std::to_string(b.k_edit) + ")";
    case BaselineMethod::cnn_enn:
      return "(k_edit=" + std::to_string(b.k_edit) + ", seed=" + std::to_string(b.seed) + ")";
    case BaselineMethod::allknn: return "(k_max=" + std::to_string(b.k_max) + ")";
    case BaselineMethod::kmeans: return "(clusters=" + std::to_string(b.clusters_per_class) + ")";
    case BaselineMethod::set_cover: return "(radius=" + format_number(b.ball_radius) + ")";
  }
  return "()";
}

MetricKind selector_metric(const SelectorConfig& cfg) {
  return std::visit([](const auto& c) { return c.metric; }, cfg);
}

Selection run_selector(const LabeledDataset& train, const SelectorConfig& cfg) {
  if (const auto* t = std::get_if<TpsConfig>(&cfg)) {
    const auto protos = tps(train, *t);
    Selection s;
    s.indices = protos.all_indices();
    s.fallback_classes = protos.fallback_classes;
    s.selection_time_s = protos.selection_time_s;
    return s;
  }
  return run_baseline(train, std::get<BaselineConfig>(cfg));
}

namespace {

EvalReport score_selection(const SplitPair& split, const Selection& selection, double baseline_gmean,
                           std::size_t model_k, MetricKind metric) {
  if (selection.count() == 0) throw std::invalid_argument("evaluate: the prototype set is empty");
  const LabeledDataset protos = selection.materialize(split.train);
  EvalReport r;
  r.model_k = model_k;
  r.baseline_gmean = baseline_gmean;
  r.prototype_gmean = g_mean(split.test.labels, knn_predict(protos, model_k, split.test.points, metric));
  r.delta_gmean = r.prototype_gmean - r.baseline_gmean;
  r.prototype_count = selection.count();
  r.train_size = split.train.size();
  r.reduction_percent =
      100.0 * (1.0 - static_cast<double>(r.prototype_count) / static_cast<double>(r.train_size));
  r.per_class_counts.assign(static_cast<std::size_t>(split.train.num_classes()), 0);
  for (int y : protos.labels) {
    if (static_cast<std::size_t>(y) < r.per_class_counts.size()) ++r.per_class_counts[static_cast<std::size_t>(y)];
  }
  r.selection_time_s = selection.selection_time_s;
  r.synthetic = selection.synthetic.has_value();
  r.fallback_classes = selection.fallback_classes;
  return r;
}

double baseline_score(const SplitPair& split, std::size_t model_k, MetricKind metric) {
  return g_mean(split.test.labels, knn_predict(split.train, model_k, split.test.points, metric));
}

}  // namespace

EvalReport evaluate(const SplitPair& split, const Selector& selector, std::size_t model_k,
                    MetricKind metric) {
  const double baseline = baseline_score(split, model_k, metric);
  const Selection selection = selector(split.train);
  return score_selection(split, selection, baseline, model_k, metric);
}

std::optional<std::size_t> pick_winner(std::span<const SweepEntry> grid, double min_reduction) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& r = grid[i].report;
    if (!r || r->reduction_percent < min_reduction) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& b = *grid[*best].report;
    if (r->delta_gmean > b.delta_gmean ||
        (r->delta_gmean == b.delta_gmean && r->reduction_percent > b.reduction_percent)) {
      best = i;
    }
  }
  return best;
}

std::vector<SweepResult> sweep_models(const SplitPair& split, const std::vector<SelectorConfig>& grid,
                                      std::span<const std::size_t> model_ks, double min_reduction) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty configuration grid");
  if (model_ks.empty()) throw std::invalid_argument("sweep: no models requested");

  // Baselines per (metric, model): metrics may differ across the grid.
  std::vector<std::optional<Selection>> selections(grid.size());
  std::vector<std::string> errors(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      selections[i] = run_selector(split.train, grid[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::vector<SweepResult> results;
  for (std::size_t model_k : model_ks) {
    SweepResult result;
    result.model_k = model_k;
    std::optional<double> baselines[3];
    for (std::size_t i = 0; i < grid.size(); ++i) {
      SweepEntry entry{grid[i], std::nullopt, errors[i]};
      if (selections[i]) {
        try {
          const MetricKind metric = selector_metric(grid[i]);
          auto& base = baselines[static_cast<int>(metric)];
          if (!base) base = baseline_score(split, model_k, metric);
          entry.report = score_selection(split, *selections[i], *base, model_k, metric);
          entry.report->config = describe(grid[i]);
        } catch (const std::exception& e) {
          entry.error = e.what();
        }
      }
      result.grid.push_back(std::move(entry));
    }
    result.winner = pick_winner(result.grid, min_reduction);
    results.push_back(std::move(result));
  }
  return results;
}

SweepResult sweep(const SplitPair& split, const std::vector<SelectorConfig>& grid,
                  std::size_t model_k, double min_reduction) {
  const std::size_t ks[] = {model_k};
  return std::move(sweep_models(split, grid, ks, min_reduction).front());
}

std::vector<EvalReport> cross_validate(const LabeledDataset& ds, const SelectorConfig& cfg,
                                       std::size_t folds, std::size_t model_k, std::uint64_t seed) {
  std::vector<EvalReport> out;
  for (const auto& fold : stratified_kfold(ds, folds, seed)) {
    SplitPair split;
    split.train_indices = fold.train_indices;
    split.test_indices = fold.test_indices;
    split.train = ds.subset(fold.train_indices);
    split.test = ds.subset(fold.test_indices);
    split.seed = seed;
    split.test_fraction = static_cast<double>(fold.test_indices.size()) / static_cast<double>(ds.size());
    auto report = evaluate(
        split, [&](const LabeledDataset& train) { return run_selector(train, cfg); }, model_k,
        selector_metric(cfg));
    report.config = describe(cfg);
    out.push_back(std::move(report));
  }
  return out;
}

TimingStats summarize_timings(std::vector<double> samples_s) {
  if (samples_s.size() < 2) throw std::invalid_argument("timing needs at least 2 iterations");
  TimingStats s;
  s.iterations = samples_s.size();
  const double n = static_cast<double>(samples_s.size());
  CompensatedSum sum;
  for (double t : samples_s) sum.add(t);
  s.mean_s = sum.value() / n;
  CompensatedSum sq;
  for (double t : samples_s) sq.add((t - s.mean_s) * (t - s.mean_s));
  const double sd = std::sqrt(sq.value() / (n - 1.0));
  s.se_s = sd / std::sqrt(n);
  s.ci_lower_s = s.mean_s - 1.96 * s.se_s;
  s.ci_upper_s = s.mean_s + 1.96 * s.se_s;
  s.samples_s = std::move(samples_s);
  return s;
}

TimingStats time_selection(const LabeledDataset& ds, const TpsConfig& cfg, std::size_t iterations) {
  if (iterations < 2) {
    throw std::invalid_argument("time_selection: iterations must be >= 2 (got " +
                                std::to_string(iterations) + ")");
  }
  (void)tps(ds, cfg);  // warm-up
  std::vector<double> samples;
  samples.reserve(iterations);
  for (std::size_t i = 0; i < iterations; ++i) {
    const auto start = std::chrono::steady_clock::now();
    (void)tps(ds, cfg);
    samples.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return summarize_timings(std::move(samples));
}

std::vector<TpsConfig> tps_grid(std::span<const double> qs, std::span<const std::size_t> ks,
                                std::span<const double> taus, const TpsConfig& base) {
  std::vector<TpsConfig> out;
  for (double q : qs) {
    for (std::size_t k : ks) {
      for (double tau : taus) {
        TpsConfig c = base;
        c.q = q;
        c.k = k;
        c.tau_min = tau;
        out.push_back(c);
      }
    }
  }
  return out;
}

}  // namespace tpskit
