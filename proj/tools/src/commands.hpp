#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "output.hpp"
#include "tpskit/presets.hpp"

namespace tpskit::cli {

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string out;
  std::string manifest;
  bool to_stdout = false;
  bool reproducible = false;  // zero wall-clock fields so reruns are byte-identical
  std::string label_col = "label";
};

struct DataOptions {
  std::string input;  // CSV path; empty means generate
  std::string kind;
  std::size_t n = 0;
  std::string noise;  // none | moderate | high | number
  std::size_t dim = 0;
  double side = 0.0;
  double sigma = 0.0;
  double ratio = 0.0;
  double factor = 0.0;
};

struct SelectorOptions {
  std::string method = "tps";
  double q = 0.05;
  std::size_t k = 1;
  double tau = 0.001;
  int h = 0;
  std::string metric = "euclidean";
  std::string essential_policy = "truncate";
  std::size_t k_edit = 3;
  std::size_t k_max = 3;
  std::size_t clusters = 10;
  double radius = 1.0;
};

struct SelectOptions {
  CommonOptions common;
  SelectorOptions selector;
  std::string input;
  std::string plot;
  std::string emit_diagram;
};

struct GridOptions {
  std::vector<double> qs;
  std::vector<std::size_t> ks;
  std::vector<double> taus;
};

struct BenchmarkOptions {
  CommonOptions common;
  DataOptions data;
  SelectorOptions selector;  // h, metric, policy and baseline parameters
  GridOptions grid;
  std::vector<std::string> selectors = {"tps"};
  std::vector<std::size_t> models = {1, 3, 5};
  double min_reduction = 0.0;
  double test_fraction = 0.3;
};

struct TimeOptions {
  CommonOptions common;
  DataOptions data;
  SelectorOptions selector;
  GridOptions grid;
  std::size_t iters = 10;
};

struct GenerateOptions {
  CommonOptions common;
  DataOptions data;
};

// Each command fills the sink and returns the manifest describing the run.
Manifest cmd_generate(const GenerateOptions& opt, OutputSink& sink);
Manifest cmd_select(const SelectOptions& opt, OutputSink& sink);
Manifest cmd_benchmark(const BenchmarkOptions& opt, OutputSink& sink);
Manifest cmd_time(const TimeOptions& opt, OutputSink& sink);

GeneratorSpec generator_spec(const DataOptions& data, std::uint64_t seed);

}  // namespace tpskit::cli
