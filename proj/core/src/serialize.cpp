#include "tpskit/serialize.hpp"

#include <cstdio>
#include <stdexcept>

namespace tpskit {

using nlohmann::json;

std::string to_string(EssentialPolicy policy) {
  return policy == EssentialPolicy::truncate ? "truncate" : "drop";
}

EssentialPolicy parse_essential_policy(const std::string& name) {
  if (name == "truncate") return EssentialPolicy::truncate;
  if (name == "drop") return EssentialPolicy::drop;
  throw std::invalid_argument("unknown essential policy '" + name + "' (expected truncate, drop)");
}

json to_json(const TpsConfig& cfg) {
  return {{"method", "tps"},
          {"q", cfg.q},
          {"K", cfg.k},
          {"tau_min", cfg.tau_min},
          {"h", cfg.homology_dim},
          {"metric", to_string(cfg.metric)},
          {"essential_policy", to_string(cfg.essential_policy)},
          {"rel_tol", cfg.rel_tol}};
}

json to_json(const BaselineConfig& cfg) {
  json j = {{"method", to_string(cfg.method)}, {"metric", to_string(cfg.metric)}, {"seed", cfg.seed}};
  switch (cfg.method) {
    case BaselineMethod::enn:
    case BaselineMethod::cnn_enn: j["k_edit"] = cfg.k_edit; break;
    case BaselineMethod::allknn: j["k_max"] = cfg.k_max; break;
    case BaselineMethod::kmeans: j["clusters_per_class"] = cfg.clusters_per_class; break;
    case BaselineMethod::set_cover: j["ball_radius"] = cfg.ball_radius; break;
    case BaselineMethod::cnn: break;
  }
  return j;
}

json to_json(const SelectorConfig& cfg) {
  return std::visit([](const auto& c) { return to_json(c); }, cfg);
}

json to_json(const PersistenceDiagram& diagram) {
  json features = json::array();
  for (const auto& f : diagram.features) {
    json death = f.essential() ? json("inf") : json(f.death);
    features.push_back({{"dim", f.dim}, {"birth", f.birth}, {"death", death}});
  }
  return {{"homology_dim", diagram.homology_dim},
          {"max_filtration", diagram.max_filtration},
          {"features", features}};
}

PersistenceDiagram diagram_from_json(const json& j) {
  PersistenceDiagram d;
  d.homology_dim = j.at("homology_dim").get<int>();
  d.max_filtration = j.at("max_filtration").get<double>();
  for (const auto& f : j.at("features")) {
    PersistenceFeature feat;
    feat.dim = f.at("dim").get<int>();
    feat.birth = f.at("birth").get<double>();
    const auto& death = f.at("death");
    if (death.is_string()) {
      if (death.get<std::string>() != "inf") throw std::invalid_argument("diagram: bad death value");
      feat.death = kInfinity;
    } else {
      feat.death = death.get<double>();
    }
    d.features.push_back(feat);
  }
  return d;
}

json to_json(const PrototypeSet& protos) {
  json per_class = json::object();
  json counts = json::object();
  for (const auto& [label, idx] : protos.per_class) {
    per_class[std::to_string(label)] = idx;
    counts[std::to_string(label)] = idx.size();
  }
  return {{"config", to_json(protos.config)},
          {"per_class", per_class},
          {"counts", counts},
          {"total", protos.total()},
          {"source_size", protos.source_size},
          {"reduction_percent", protos.reduction_percent()},
          {"selection_time_s", protos.selection_time_s},
          {"fallback_classes", protos.fallback_classes}};
}

json selection_to_json(const Selection& selection, const SelectorConfig& cfg,
                       const LabeledDataset& train) {
  json per_class = json::object();
  json counts = json::object();
  const int classes = train.num_classes();
  for (int c = 0; c < classes; ++c) {
    per_class[std::to_string(c)] = json::array();
    counts[std::to_string(c)] = 0;
  }
  json synthetic;
  if (selection.synthetic) {
    synthetic = json::array();
    const auto& s = *selection.synthetic;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto row = s.points.row(i);
      synthetic.push_back({{"label", s.labels[i]}, {"point", std::vector<double>(row.begin(), row.end())}});
      counts[std::to_string(s.labels[i])] = counts[std::to_string(s.labels[i])].get<std::size_t>() + 1;
    }
  } else {
    for (auto i : selection.indices) {
      const auto key = std::to_string(train.labels.at(i));
      per_class[key].push_back(i);
      counts[key] = counts[key].get<std::size_t>() + 1;
    }
  }
  const double reduction =
      100.0 * (1.0 - static_cast<double>(selection.count()) / static_cast<double>(train.size()));
  json j = {{"config", to_json(cfg)},
            {"per_class", per_class},
            {"counts", counts},
            {"total", selection.count()},
            {"source_size", train.size()},
            {"reduction_percent", reduction},
            {"selection_time_s", selection.selection_time_s},
            {"fallback_classes", selection.fallback_classes}};
  if (selection.synthetic) j["synthetic_points"] = synthetic;
  return j;
}

json to_json(const EvalReport& r) {
  return {{"model", r.model},
          {"model_k", r.model_k},
          {"config", r.config},
          {"baseline_gmean", r.baseline_gmean},
          {"prototype_gmean", r.prototype_gmean},
          {"delta_gmean", r.delta_gmean},
          {"delta_gmean_percent", r.delta_gmean_percent()},
          {"prototype_count", r.prototype_count},
          {"train_size", r.train_size},
          {"reduction_percent", r.reduction_percent},
          {"per_class_counts", r.per_class_counts},
          {"prototype_ratio", ratio_string(r.per_class_counts)},
          {"selection_time_s", r.selection_time_s},
          {"synthetic", r.synthetic},
          {"fallback_classes", r.fallback_classes}};
}

json to_json(const TimingStats& s) {
  return {{"iterations", s.iterations},
          {"mean_s", s.mean_s},
          {"se_s", s.se_s},
          {"ci_lower_s", s.ci_lower_s},
          {"ci_upper_s", s.ci_upper_s}};
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string ratio_string(std::span<const std::size_t> counts) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  std::string counts_part, pct_part;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i > 0) {
      counts_part += ':';
      pct_part += ", ";
    }
    counts_part += std::to_string(counts[i]);
    const double pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(counts[i]) / static_cast<double>(total);
    pct_part += fixed(pct, 1) + "%";
  }
  return counts_part + " (" + pct_part + ")";
}

std::vector<std::string> report_csv_header() {
  return {"selector",         "model",          "delta_gmean_percent", "delta_gmean",
          "prototypes",       "reduction_percent", "prototype_ratio",  "config",
          "baseline_gmean",   "prototype_gmean",   "selection_time_s", "winner"};
}

std::vector<std::string> report_csv_row(const std::string& selector, const EvalReport& r, bool winner) {
  return {selector,
          std::to_string(r.model_k) + "-NN",
          fixed(r.delta_gmean_percent(), 2),
          fixed(r.delta_gmean, 4),
          std::to_string(r.prototype_count),
          fixed(r.reduction_percent, 2),
          ratio_string(r.per_class_counts),
          r.config,
          fixed(r.baseline_gmean, 4),
          fixed(r.prototype_gmean, 4),
          fixed(r.selection_time_s, 6),
          winner ? "1" : "0"};
}

}  // namespace tpskit
