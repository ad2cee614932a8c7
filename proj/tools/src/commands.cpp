#include "commands.hpp"

#include <charconv>
#include <sstream>

#include "svg.hpp"
#include "tpskit/eval.hpp"
#include "tpskit/rng.hpp"
#include "tpskit/serialize.hpp"

namespace tpskit::cli {

using nlohmann::json;

namespace {

// Runs a validation step, reporting failures as usage errors.
template <class F>
void validate_usage(F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

double parse_noise(const std::string& text) {
  if (text.empty()) return -1.0;
  if (text == "none" || text == "moderate" || text == "high") {
    return noise_sigma(parse_noise_level(text));
  }
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 0.0) {
    throw UsageError("--noise must be none, moderate, high or a nonnegative number, got '" + text + "'");
  }
  return value;
}

json spec_json(const GeneratorSpec& s) {
  json j = {{"kind", s.kind}, {"n", s.n}, {"seed", s.seed}};
  if (s.kind == "moons" || s.kind == "circles") j["noise"] = s.noise;
  if (s.kind == "circles") j["factor"] = s.factor;
  if (s.kind == "hypercube") {
    j["dim"] = s.dim;
    j["side"] = s.side;
    j["ratio"] = s.ratio;
  }
  if (s.kind != "moons" && s.kind != "circles") j["sigma"] = s.sigma;
  return j;
}

struct LoadedData {
  LabeledDataset data;
  std::vector<std::string> label_names;
  json source;
  std::string input_hash;
};

LoadedData load_data(const DataOptions& opt, const CommonOptions& common, const std::string& default_kind) {
  LoadedData out;
  if (!opt.input.empty()) {
    if (!opt.kind.empty()) throw UsageError("give either an input CSV or --kind, not both");
    auto csv = load_csv(opt.input, common.label_col);
    out.data = std::move(csv.data);
    out.label_names = std::move(csv.label_names);
    out.input_hash = hash_file(opt.input);
    out.source = {{"input", opt.input}, {"label_col", common.label_col}, {"input_hash", out.input_hash}};
    return out;
  }
  DataOptions d = opt;
  if (d.kind.empty()) d.kind = default_kind;
  if (d.kind.empty()) throw UsageError("give an input CSV or --kind to generate data");
  const GeneratorSpec spec = generator_spec(d, common.seed);
  validate_usage([&] { out.data = make_dataset(spec); });
  for (int c = 0; c < out.data.num_classes(); ++c) out.label_names.push_back(std::to_string(c));
  out.source = {{"generator", spec_json(resolve(spec))}};
  return out;
}

TpsConfig tps_config(const SelectorOptions& s) {
  TpsConfig cfg;
  cfg.q = s.q;
  cfg.k = s.k;
  cfg.tau_min = s.tau;
  cfg.homology_dim = s.h;
  validate_usage([&] {
    cfg.metric = parse_metric(s.metric);
    cfg.essential_policy = parse_essential_policy(s.essential_policy);
    cfg.validate();
  });
  return cfg;
}

BaselineConfig baseline_config(const SelectorOptions& s, const std::string& method, std::uint64_t seed) {
  BaselineConfig cfg;
  cfg.k_edit = s.k_edit;
  cfg.k_max = s.k_max;
  cfg.clusters_per_class = s.clusters;
  cfg.ball_radius = s.radius;
  cfg.seed = derive_seed(seed, "baseline");
  validate_usage([&] {
    cfg.method = parse_baseline_method(method);
    cfg.metric = parse_metric(s.metric);
    cfg.validate();
  });
  return cfg;
}

SelectorConfig selector_config(const SelectorOptions& s, const std::string& method, std::uint64_t seed) {
  if (method == "tps") return tps_config(s);
  return baseline_config(s, method, seed);
}

void require_destination(const CommonOptions& c) {
  if (c.out.empty() && !c.to_stdout) throw UsageError("give --out FILE or --stdout");
  if (!c.out.empty() && c.to_stdout) throw UsageError("--out and --stdout are mutually exclusive");
}

void emit(const CommonOptions& c, OutputSink& sink, const std::string& contents) {
  if (c.to_stdout) {
    sink.write_stdout(contents);
  } else {
    sink.write(c.out, contents);
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<double> or_default(const std::vector<double>& v, std::vector<double> d) {
  return v.empty() ? d : v;
}

std::vector<std::size_t> or_default(const std::vector<std::size_t>& v, std::vector<std::size_t> d) {
  return v.empty() ? d : v;
}

// Shared selector options of the grid commands (q, K and tau come from the grid).
json selector_options_json(const SelectorOptions& s) {
  return {{"h", s.h},
          {"metric", s.metric},
          {"essential_policy", s.essential_policy},
          {"k_edit", s.k_edit},
          {"k_max", s.k_max},
          {"clusters", s.clusters},
          {"radius", s.radius}};
}

}  // namespace

GeneratorSpec generator_spec(const DataOptions& data, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.kind = data.kind;
  spec.n = data.n;
  spec.noise = parse_noise(data.noise);
  spec.dim = data.dim;
  spec.side = data.side;
  spec.sigma = data.sigma;
  spec.ratio = data.ratio;
  spec.factor = data.factor;
  spec.seed = seed;
  validate_usage([&] { spec = resolve(spec); });
  return spec;
}

Manifest cmd_generate(const GenerateOptions& opt, OutputSink& sink) {
  require_destination(opt.common);
  if (!opt.data.input.empty()) throw UsageError("generate does not read an input file");
  if (opt.data.kind.empty()) throw UsageError("generate needs --kind");
  const GeneratorSpec spec = generator_spec(opt.data, opt.common.seed);
  LabeledDataset ds;
  validate_usage([&] { ds = make_dataset(spec); });

  std::ostringstream csv;
  write_csv(csv, ds, opt.common.label_col);
  emit(opt.common, sink, csv.str());

  Manifest m;
  m.command = "generate";
  m.config = spec_json(spec);
  m.config["label_col"] = opt.common.label_col;
  m.seed = opt.common.seed;
  return m;
}

Manifest cmd_select(const SelectOptions& opt, OutputSink& sink) {
  require_destination(opt.common);
  if (opt.input.empty()) throw UsageError("select needs an input CSV");
  const SelectorConfig cfg = selector_config(opt.selector, opt.selector.method, opt.common.seed);
  if (!opt.emit_diagram.empty() && !std::holds_alternative<TpsConfig>(cfg)) {
    throw UsageError("--emit-diagram is only available for --method tps");
  }

  DataOptions data;
  data.input = opt.input;
  const LoadedData loaded = load_data(data, opt.common, "");
  const LabeledDataset& ds = loaded.data;
  if (!opt.plot.empty() && ds.dim() != 2) {
    throw UsageError("--plot needs 2-D data; this dataset has " + std::to_string(ds.dim()) + " features");
  }

  json result;
  LabeledDataset chosen;
  json diagrams;
  if (const auto* t = std::get_if<TpsConfig>(&cfg)) {
    std::vector<BpsTrace> traces;
    PrototypeSet protos = tps(ds, *t, traces);
    if (opt.common.reproducible) protos.selection_time_s = 0.0;
    result = to_json(protos);
    chosen = ds.subset(protos.all_indices());
    diagrams = json::array();
    for (std::size_t c = 0; c < traces.size(); ++c) {
      const auto& tr = traces[c];
      diagrams.push_back({{"label", c},
                          {"neighbor", to_json(tr.neighbor_diagram)},
                          {"radius", tr.slice.empty() ? json(nullptr) : to_json(tr.radius_diagram)},
                          {"slice", tr.slice}});
    }
  } else {
    Selection sel = run_selector(ds, cfg);
    if (opt.common.reproducible) sel.selection_time_s = 0.0;
    result = selection_to_json(sel, cfg, ds);
    chosen = sel.materialize(ds);
  }
  result["label_names"] = loaded.label_names;
  emit(opt.common, sink, dump(result));

  if (!opt.emit_diagram.empty()) sink.write(opt.emit_diagram, dump({{"classes", diagrams}}));
  if (!opt.plot.empty()) {
    sink.write(opt.plot, scatter_svg(ds, chosen, selector_name(cfg) + " " + describe(cfg) + ": " +
                                                     std::to_string(chosen.size()) + " prototypes"));
  }

  Manifest m;
  m.command = "select";
  m.config = {{"method", opt.selector.method},
              {"selector", to_json(cfg)},
              {"label_col", opt.common.label_col},
              {"reproducible", opt.common.reproducible}};
  m.seed = opt.common.seed;
  m.input_hash = loaded.input_hash;
  return m;
}

Manifest cmd_benchmark(const BenchmarkOptions& opt, OutputSink& sink) {
  require_destination(opt.common);
  if (opt.selectors.empty()) throw UsageError("--selectors is empty");
  if (opt.models.empty()) throw UsageError("--models is empty");
  if (!(opt.test_fraction > 0.0 && opt.test_fraction < 1.0)) {
    throw UsageError("--test-fraction must lie in (0, 1)");
  }
  const auto qs = or_default(opt.grid.qs, {0.05, 0.10, 0.15, 0.20, 0.25});
  const auto ks = or_default(opt.grid.ks, {1, 3, 5, 10});
  const auto taus = or_default(opt.grid.taus, {0.001, 0.01, 0.1});

  std::vector<std::pair<std::string, std::vector<SelectorConfig>>> grids;
  for (const auto& name : opt.selectors) {
    std::vector<SelectorConfig> grid;
    if (name == "tps") {
      const TpsConfig base = tps_config(opt.selector);
      std::vector<TpsConfig> configs;
      validate_usage([&] { configs = tps_grid(qs, ks, taus, base); });
      grid.assign(configs.begin(), configs.end());
    } else {
      grid.push_back(baseline_config(opt.selector, name, opt.common.seed));
    }
    grids.emplace_back(name, std::move(grid));
  }

  const LoadedData loaded = load_data(opt.data, opt.common, "");
  const SplitPair split = stratified_split(loaded.data, opt.test_fraction, derive_seed(opt.common.seed, "split"));

  json selectors_json = json::array();
  std::string csv = csv_line([] {
    auto h = report_csv_header();
    h.push_back("error");
    return h;
  }());
  for (const auto& [name, grid] : grids) {
    auto results = sweep_models(split, grid, opt.models, opt.min_reduction);
    json per_model = json::array();
    for (auto& result : results) {
      json rows = json::array();
      for (std::size_t i = 0; i < result.grid.size(); ++i) {
        auto& entry = result.grid[i];
        const bool winner = result.winner && *result.winner == i;
        if (entry.report && opt.common.reproducible) entry.report->selection_time_s = 0.0;
        json row = {{"config", to_json(entry.config)}, {"winner", winner}};
        if (entry.report) {
          row["report"] = to_json(*entry.report);
          auto fields = report_csv_row(name, *entry.report, winner);
          fields.push_back("");
          csv += csv_line(fields);
        } else {
          row["error"] = entry.error;
          std::vector<std::string> fields(report_csv_header().size() + 1);
          fields[0] = name;
          fields[1] = std::to_string(result.model_k) + "-NN";
          fields[7] = describe(entry.config);
          fields[11] = "0";
          fields.back() = entry.error;
          csv += csv_line(fields);
        }
        rows.push_back(std::move(row));
      }
      per_model.push_back({{"model_k", result.model_k},
                           {"winner", result.winner ? json(*result.winner) : json(nullptr)},
                           {"rows", rows}});
    }
    selectors_json.push_back({{"selector", name}, {"results", per_model}});
  }

  const json config = {{"selectors", opt.selectors},
                       {"models", opt.models},
                       {"grid", {{"q", qs}, {"k", ks}, {"tau", taus}}},
                       {"selector_options", selector_options_json(opt.selector)},
                       {"min_reduction", opt.min_reduction},
                       {"test_fraction", opt.test_fraction},
                       {"reproducible", opt.common.reproducible}};
  if (!opt.common.to_stdout && ends_with(opt.common.out, ".json")) {
    const json report = {{"source", loaded.source},
                         {"config", config},
                         {"split", {{"train_size", split.train.size()}, {"test_size", split.test.size()}}},
                         {"selectors", selectors_json}};
    emit(opt.common, sink, dump(report));
  } else {
    emit(opt.common, sink, csv);
  }

  Manifest m;
  m.command = "benchmark";
  m.config = config;
  m.config["source"] = loaded.source;
  m.seed = opt.common.seed;
  m.input_hash = loaded.input_hash;
  return m;
}

Manifest cmd_time(const TimeOptions& opt, OutputSink& sink) {
  require_destination(opt.common);
  if (opt.iters < 2) throw UsageError("--iters must be at least 2, got " + std::to_string(opt.iters));
  const auto qs = or_default(opt.grid.qs, {0.05, 0.25});
  const auto ks = or_default(opt.grid.ks, {1, 10});
  const auto taus = or_default(opt.grid.taus, {0.001, 0.1});
  const TpsConfig base = tps_config(opt.selector);
  std::vector<TpsConfig> grid;
  validate_usage([&] { grid = tps_grid(qs, ks, taus, base); });

  const LoadedData loaded = load_data(opt.data, opt.common, "hypercube");

  // Strictly one configuration at a time.
  json rows = json::array();
  std::string csv = csv_line({"q", "K", "tau_min", "iterations", "mean_s", "se_s", "ci_lower_s", "ci_upper_s"});
  for (const auto& cfg : grid) {
    TimingStats stats = time_selection(loaded.data, cfg, opt.iters);
    if (opt.common.reproducible) stats = TimingStats{stats.iterations, 0, 0, 0, 0, {}};
    json row = {{"q", cfg.q}, {"K", cfg.k}, {"tau_min", cfg.tau_min}};
    row.update(to_json(stats));
    rows.push_back(row);
    auto num = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", v);
      return std::string(buf);
    };
    csv += csv_line({num(cfg.q), std::to_string(cfg.k), num(cfg.tau_min), std::to_string(stats.iterations),
                     num(stats.mean_s), num(stats.se_s), num(stats.ci_lower_s), num(stats.ci_upper_s)});
  }

  const json config = {{"grid", {{"q", qs}, {"k", ks}, {"tau", taus}}},
                       {"selector_options", selector_options_json(opt.selector)},
                       {"iterations", opt.iters},
                       {"reproducible", opt.common.reproducible}};
  if (!opt.common.to_stdout && ends_with(opt.common.out, ".csv")) {
    emit(opt.common, sink, csv);
  } else {
    emit(opt.common, sink, dump({{"source", loaded.source}, {"config", config}, {"rows", rows}}));
  }

  Manifest m;
  m.command = "time";
  m.config = config;
  m.config["source"] = loaded.source;
  m.seed = opt.common.seed;
  m.input_hash = loaded.input_hash;
  return m;
}

}  // namespace tpskit::cli
