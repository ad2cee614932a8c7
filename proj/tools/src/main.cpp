#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "tpskit/metric.hpp"

namespace {

using namespace tpskit::cli;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

void add_common(CLI::App* cmd, CommonOptions& c) {
  cmd->add_option("--seed", c.seed, "Seed for all randomness (default 0)");
  cmd->add_option("--out", c.out, "Output file");
  cmd->add_flag("--stdout", c.to_stdout, "Write the data to stdout instead of --out");
  cmd->add_option("--manifest", c.manifest, "Manifest path (default: <out>.manifest.json)");
  cmd->add_flag("--reproducible", c.reproducible, "Zero wall-clock fields in the outputs");
  cmd->add_option("--label-col", c.label_col, "Label column name (default label)");
}

void add_data(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--kind", d.kind, "Generator: moons, circles, well-separated, overlapping-blobs, "
                                    "overlapping-clusters, imbalanced, mixed, hypercube");
  cmd->add_option("--n", d.n, "Number of points");
  cmd->add_option("--noise", d.noise, "none, moderate, high or a sigma (moons, circles)");
  cmd->add_option("--dim", d.dim, "Dimension (hypercube)");
  cmd->add_option("--side", d.side, "Cube side length (hypercube)");
  cmd->add_option("--sigma", d.sigma, "Cluster spread (blobs, hypercube)");
  cmd->add_option("--ratio", d.ratio, "Majority/minority ratio (hypercube)");
  cmd->add_option("--factor", d.factor, "Inner radius (circles)");
}

void add_selector(CLI::App* cmd, SelectorOptions& s, bool with_method) {
  if (with_method) {
    cmd->add_option("--method", s.method, "tps, cnn, enn, cnn_enn, allknn, kmeans, set_cover");
    cmd->add_option("--q", s.q, "Neighbor quantile in [0, 1]");
    cmd->add_option("--k", s.k, "Other-class neighbors per point");
    cmd->add_option("--tau", s.tau, "Minimum persistence");
  }
  cmd->add_option("--h", s.h, "Homology dimension, 0 or 1");
  cmd->add_option("--metric", s.metric, "euclidean, manhattan or cosine");
  cmd->add_option("--essential-policy", s.essential_policy, "truncate or drop");
  cmd->add_option("--k-edit", s.k_edit, "ENN neighborhood size");
  cmd->add_option("--k-max", s.k_max, "AllKNN largest k");
  cmd->add_option("--clusters", s.clusters, "k-means clusters per class");
  cmd->add_option("--radius", s.radius, "Set-cover ball radius");
}

void add_grid(CLI::App* cmd, GridOptions& g) {
  cmd->add_option("--q", g.qs, "Quantiles, comma separated")->delimiter(',');
  cmd->add_option("--k", g.ks, "Neighbor counts, comma separated")->delimiter(',');
  cmd->add_option("--tau", g.taus, "Minimum persistence values, comma separated")->delimiter(',');
}

void write_manifest(const CommonOptions& c, const Manifest& m, const OutputSink& sink) {
  std::string path = c.manifest;
  if (path.empty() && !c.out.empty()) path = manifest_path_for(c.out);
  if (path.empty()) return;
  OutputSink manifest_sink;
  manifest_sink.write(path, dump(manifest_json(m, sink)));
}

struct Invocation {
  GenerateOptions generate;
  SelectOptions select;
  BenchmarkOptions benchmark;
  TimeOptions time;
  std::string rerun_manifest;
  bool rerun_verify = false;
};

int dispatch(const std::vector<std::string>& args, bool verify, OutputSink& sink);

int rerun(const std::string& manifest_path, bool verify) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot read manifest '" + manifest_path + "'");
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("manifest '" + manifest_path + "' is not valid JSON: " + e.what());
  }
  const auto args = manifest.at("argv").get<std::vector<std::string>>();
  OutputSink sink;
  const int code = dispatch(args, verify, sink);
  if (code != kExitOk || !verify) return code;

  const auto& recorded = manifest.at("outputs");
  if (recorded != sink.records()) {
    std::cerr << "tpskit: rerun of " << manifest_path << " differs from the recorded outputs\n";
    for (std::size_t i = 0; i < std::max(recorded.size(), sink.records().size()); ++i) {
      const json a = i < recorded.size() ? recorded[i] : json(nullptr);
      const json b = i < sink.records().size() ? sink.records()[i] : json(nullptr);
      if (a != b) std::cerr << "  recorded " << a.dump() << "\n  rerun    " << b.dump() << "\n";
    }
    return kExitRuntime;
  }
  std::cerr << "tpskit: " << recorded.size() << " output(s) reproduced exactly\n";
  return kExitOk;
}

int dispatch(const std::vector<std::string>& args, bool verify, OutputSink& sink) {
  CLI::App app{"Topological prototype selection toolkit", "tpskit"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "tpskit 0.1.0");
  Invocation inv;

  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  add_common(gen, inv.generate.common);
  add_data(gen, inv.generate.data);

  auto* sel = app.add_subcommand("select", "Select prototypes from a CSV dataset");
  add_common(sel, inv.select.common);
  add_selector(sel, inv.select.selector, true);
  sel->add_option("input", inv.select.input, "Input CSV")->required();
  sel->add_option("--plot", inv.select.plot, "SVG scatter of the selection (2-D data only)");
  sel->add_option("--emit-diagram", inv.select.emit_diagram, "Write persistence diagrams as JSON");

  auto* bench = app.add_subcommand("benchmark", "Grid search and k-NN evaluation");
  add_common(bench, inv.benchmark.common);
  add_data(bench, inv.benchmark.data);
  add_selector(bench, inv.benchmark.selector, false);
  add_grid(bench, inv.benchmark.grid);
  bench->add_option("input", inv.benchmark.data.input, "Input CSV (or use --kind)");
  bench->add_option("--selectors", inv.benchmark.selectors, "Comma separated selectors")->delimiter(',');
  bench->add_option("--models", inv.benchmark.models, "k values of the k-NN models")->delimiter(',');
  bench->add_option("--min-reduction", inv.benchmark.min_reduction, "Winners must reduce at least this %");
  bench->add_option("--test-fraction", inv.benchmark.test_fraction, "Test share of the split (default 0.3)");

  auto* timing = app.add_subcommand("time", "Time TPS selection over a configuration grid");
  add_common(timing, inv.time.common);
  add_data(timing, inv.time.data);
  add_selector(timing, inv.time.selector, false);
  add_grid(timing, inv.time.grid);
  timing->add_option("input", inv.time.data.input, "Input CSV (default: generated hypercube data)");
  timing->add_option("--iters", inv.time.iters, "Timed iterations per configuration (>= 2)");

  auto* re = app.add_subcommand("rerun", "Repeat the run recorded in a manifest");
  re->add_option("manifest", inv.rerun_manifest, "Manifest JSON")->required();
  re->add_flag("--verify", inv.rerun_verify, "Compare against the recorded outputs without writing");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (re->parsed()) {
    if (verify) throw UsageError("a manifest cannot record a rerun");
    return rerun(inv.rerun_manifest, inv.rerun_verify);
  }

  sink.set_verify(verify);
  Manifest manifest;
  const CommonOptions* common = nullptr;
  if (gen->parsed()) {
    manifest = cmd_generate(inv.generate, sink);
    common = &inv.generate.common;
  } else if (sel->parsed()) {
    manifest = cmd_select(inv.select, sink);
    common = &inv.select.common;
  } else if (bench->parsed()) {
    manifest = cmd_benchmark(inv.benchmark, sink);
    common = &inv.benchmark.common;
  } else {
    manifest = cmd_time(inv.time, sink);
    common = &inv.time.common;
  }
  manifest.argv = args;
  sink.flush_stdout();
  if (!verify) write_manifest(*common, manifest, sink);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    OutputSink sink;
    return dispatch(args, false, sink);
  } catch (const UsageError& e) {
    std::cerr << "tpskit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "tpskit: error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
