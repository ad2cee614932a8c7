#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

#include "output.hpp"

namespace tpskit::cli {

namespace {

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                                  "#bcbd22", "#17becf"};
constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 40.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string scatter_svg(const LabeledDataset& data, const LabeledDataset& prototypes,
                        const std::string& title) {
  if (data.dim() != 2) {
    throw UsageError("--plot needs 2-D data; this dataset has " + std::to_string(data.dim()) +
                     " features");
  }
  double x0 = data.points(0, 0), x1 = x0, y0 = data.points(0, 1), y1 = y0;
  auto grow = [&](const LabeledDataset& ds) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      x0 = std::min(x0, ds.points(i, 0));
      x1 = std::max(x1, ds.points(i, 0));
      y0 = std::min(y0, ds.points(i, 1));
      y1 = std::max(y1, ds.points(i, 1));
    }
  };
  grow(data);
  grow(prototypes);
  const double sx = (kWidth - 2 * kMargin) / std::max(x1 - x0, 1e-12);
  const double sy = (kHeight - 2 * kMargin) / std::max(y1 - y0, 1e-12);
  auto px = [&](double x) { return num(kMargin + (x - x0) * sx); };
  auto py = [&](double y) { return num(kHeight - kMargin - (y - y0) * sy); };
  auto colour = [](int label) { return kPalette[static_cast<std::size_t>(label) % kPalette.size()]; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
                    num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" + escape(title) + "</text>\n";
  svg += "<g id=\"data\" fill=\"none\" stroke-width=\"1\" opacity=\"0.6\">\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    svg += "<circle cx=\"" + px(data.points(i, 0)) + "\" cy=\"" + py(data.points(i, 1)) +
           "\" r=\"3\" stroke=\"" + colour(data.labels[i]) + "\"/>\n";
  }
  svg += "</g>\n<g id=\"prototypes\" stroke=\"black\" stroke-width=\"0.8\">\n";
  for (std::size_t i = 0; i < prototypes.size(); ++i) {
    svg += "<circle cx=\"" + px(prototypes.points(i, 0)) + "\" cy=\"" + py(prototypes.points(i, 1)) +
           "\" r=\"5\" fill=\"" + colour(prototypes.labels[i]) + "\"/>\n";
  }
  svg += "</g>\n<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int c = 0; c < data.num_classes(); ++c) {
    const double y = kMargin + 16.0 * c;
    svg += "<circle cx=\"" + num(kWidth - 90) + "\" cy=\"" + num(y) + "\" r=\"5\" fill=\"" + colour(c) +
           "\"/><text x=\"" + num(kWidth - 80) + "\" y=\"" + num(y + 4) + "\">class " + std::to_string(c) +
           "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace tpskit::cli
