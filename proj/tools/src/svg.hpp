#pragma once

#include <string>

#include "tpskit/dataset.hpp"

namespace tpskit::cli {

// Scatter plot of a 2-D dataset: every point as a hollow circle in its class
// colour, prototypes as filled markers on top. Throws UsageError for d != 2.
std::string scatter_svg(const LabeledDataset& data, const LabeledDataset& prototypes,
                        const std::string& title);

}  // namespace tpskit::cli
