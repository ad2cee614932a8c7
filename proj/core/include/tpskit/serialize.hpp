#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tpskit/eval.hpp"
#include "tpskit/persistence.hpp"
#include "tpskit/tps.hpp"

namespace tpskit {

std::string to_string(EssentialPolicy policy);
EssentialPolicy parse_essential_policy(const std::string& name);

nlohmann::json to_json(const TpsConfig& cfg);
nlohmann::json to_json(const BaselineConfig& cfg);
nlohmann::json to_json(const SelectorConfig& cfg);

// {"homology_dim", "max_filtration", "features": [{"dim", "birth", "death" | "inf"}]}
nlohmann::json to_json(const PersistenceDiagram& diagram);
PersistenceDiagram diagram_from_json(const nlohmann::json& j);

// {config, per_class: {label: [indices]}, counts, reduction_percent,
//  selection_time_s, fallback_classes}
nlohmann::json to_json(const PrototypeSet& protos);

// Same schema for a baseline selection; kmeans adds synthetic_points.
nlohmann::json selection_to_json(const Selection& selection, const SelectorConfig& cfg,
                                 const LabeledDataset& train);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const TimingStats& stats);

// "53:38:84 (30.3%, 21.7%, 48.0%)"
std::string ratio_string(std::span<const std::size_t> counts);

// Report table columns, in order.
std::vector<std::string> report_csv_header();
std::vector<std::string> report_csv_row(const std::string& selector, const EvalReport& report,
                                        bool winner);

}  // namespace tpskit
