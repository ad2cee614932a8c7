#include "tpskit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "tpskit/rng.hpp"

namespace tpskit {

int LabeledDataset::num_classes() const noexcept {
  int k = 0;
  for (int y : labels) k = std::max(k, y + 1);
  return k;
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes()), 0);
  for (int y : labels) {
    if (y >= 0) ++counts[static_cast<std::size_t>(y)];
  }
  return counts;
}

std::vector<std::size_t> LabeledDataset::indices_of(int label) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) out.push_back(i);
  }
  return out;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.points = points.select_rows(indices);
  out.labels.reserve(indices.size());
  for (auto i : indices) out.labels.push_back(labels.at(i));
  return out;
}

void LabeledDataset::validate() const {
  if (labels.empty()) throw std::invalid_argument("dataset is empty");
  if (points.rows() != labels.size()) {
    throw std::invalid_argument("dataset has " + std::to_string(points.rows()) + " points but " +
                                std::to_string(labels.size()) + " labels");
  }
  if (points.cols() == 0) throw std::invalid_argument("dataset has zero feature columns");
  for (std::size_t r = 0; r < points.rows(); ++r) {
    for (std::size_t c = 0; c < points.cols(); ++c) {
      if (!std::isfinite(points(r, c))) {
        throw std::invalid_argument("non-finite coordinate at row " + std::to_string(r) +
                                    ", column " + std::to_string(c));
      }
    }
  }
  for (int y : labels) {
    if (y < 0) throw std::invalid_argument("negative class label " + std::to_string(y));
  }
  const auto counts = class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw std::invalid_argument("class label " + std::to_string(c) +
                                  " is unused; labels must cover 0..K-1");
    }
  }
}

double noise_sigma(NoiseLevel level) noexcept {
  switch (level) {
    case NoiseLevel::none: return 0.0;
    case NoiseLevel::moderate: return 0.15;
    case NoiseLevel::high: return 0.30;
  }
  return 0.0;
}

NoiseLevel parse_noise_level(const std::string& name) {
  if (name == "none") return NoiseLevel::none;
  if (name == "moderate") return NoiseLevel::moderate;
  if (name == "high") return NoiseLevel::high;
  throw std::invalid_argument("unknown noise level '" + name + "' (expected none, moderate, high)");
}

LabeledDataset make_blobs(const std::vector<std::size_t>& n_per_class,
                          const std::vector<std::vector<double>>& centers, double sigma,
                          std::uint64_t seed) {
  if (n_per_class.size() != centers.size()) {
    throw std::invalid_argument("make_blobs: " + std::to_string(n_per_class.size()) +
                                " class counts but " + std::to_string(centers.size()) + " centers");
  }
  if (centers.empty()) throw std::invalid_argument("make_blobs: no classes requested");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("make_blobs: sigma must be positive");
  }
  const std::size_t dim = centers.front().size();
  if (dim == 0) throw std::invalid_argument("make_blobs: centers must have dimension >= 1");
  std::size_t total = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    if (centers[c].size() != dim) throw std::invalid_argument("make_blobs: centers differ in dimension");
    if (n_per_class[c] == 0) throw std::invalid_argument("make_blobs: every class needs >= 1 point");
    total += n_per_class[c];
  }

  Rng rng(seed);
  LabeledDataset ds;
  ds.points = Matrix(total, dim);
  ds.labels.reserve(total);
  std::size_t r = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (std::size_t i = 0; i < n_per_class[c]; ++i, ++r) {
      for (std::size_t j = 0; j < dim; ++j) ds.points(r, j) = centers[c][j] + sigma * rng.normal();
      ds.labels.push_back(static_cast<int>(c));
    }
  }
  return ds;
}

namespace {

double linspace_at(double start, double stop, std::size_t count, std::size_t i, bool endpoint) {
  if (count <= 1) return start;
  const double steps = static_cast<double>(endpoint ? count - 1 : count);
  return start + (stop - start) * static_cast<double>(i) / steps;
}

void add_noise(Matrix& points, double noise, Rng& rng) {
  if (noise == 0.0) return;
  for (std::size_t r = 0; r < points.rows(); ++r) {
    for (std::size_t c = 0; c < points.cols(); ++c) points(r, c) += noise * rng.normal();
  }
}

void check_noise(double noise, const char* who) {
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw std::invalid_argument(std::string(who) + ": noise must be a nonnegative real");
  }
}

}  // namespace

LabeledDataset make_moons(std::size_t n_total, double noise, std::uint64_t seed) {
  if (n_total < 2) throw std::invalid_argument("make_moons: n_total must be >= 2");
  check_noise(noise, "make_moons");
  const std::size_t n_outer = n_total / 2;
  const std::size_t n_inner = n_total - n_outer;
  LabeledDataset ds;
  ds.points = Matrix(n_total, 2);
  ds.labels.reserve(n_total);
  for (std::size_t i = 0; i < n_outer; ++i) {
    const double t = linspace_at(0.0, std::numbers::pi, n_outer, i, true);
    ds.points(i, 0) = std::cos(t);
    ds.points(i, 1) = std::sin(t);
    ds.labels.push_back(0);
  }
  for (std::size_t i = 0; i < n_inner; ++i) {
    const double t = linspace_at(0.0, std::numbers::pi, n_inner, i, true);
    ds.points(n_outer + i, 0) = 1.0 - std::cos(t);
    ds.points(n_outer + i, 1) = 0.5 - std::sin(t);
    ds.labels.push_back(1);
  }
  Rng rng(seed);
  add_noise(ds.points, noise, rng);
  return ds;
}

LabeledDataset make_circles(std::size_t n_total, double noise, double radius_factor,
                            std::uint64_t seed) {
  if (n_total < 2) throw std::invalid_argument("make_circles: n_total must be >= 2");
  check_noise(noise, "make_circles");
  if (!(radius_factor > 0.0 && radius_factor < 1.0)) {
    throw std::invalid_argument("make_circles: radius_factor must lie in (0, 1)");
  }
  const std::size_t n_outer = n_total / 2;
  const std::size_t n_inner = n_total - n_outer;
  LabeledDataset ds;
  ds.points = Matrix(n_total, 2);
  ds.labels.reserve(n_total);
  for (std::size_t i = 0; i < n_outer; ++i) {
    const double t = linspace_at(0.0, 2.0 * std::numbers::pi, n_outer, i, false);
    ds.points(i, 0) = std::cos(t);
    ds.points(i, 1) = std::sin(t);
    ds.labels.push_back(0);
  }
  for (std::size_t i = 0; i < n_inner; ++i) {
    const double t = linspace_at(0.0, 2.0 * std::numbers::pi, n_inner, i, false);
    ds.points(n_outer + i, 0) = radius_factor * std::cos(t);
    ds.points(n_outer + i, 1) = radius_factor * std::sin(t);
    ds.labels.push_back(1);
  }
  Rng rng(seed);
  add_noise(ds.points, noise, rng);
  return ds;
}

LabeledDataset make_hypercube_clusters(std::size_t n_total, std::size_t dim, double side,
                                       double sigma, double imbalance_ratio, std::uint64_t seed) {
  if (dim < 1 || dim > 20) throw std::invalid_argument("make_hypercube_clusters: dim must be in [1, 20]");
  if (!(side > 0.0)) throw std::invalid_argument("make_hypercube_clusters: side must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("make_hypercube_clusters: sigma must be positive");
  if (!(imbalance_ratio >= 1.0) || !std::isfinite(imbalance_ratio)) {
    throw std::invalid_argument("make_hypercube_clusters: imbalance_ratio must be >= 1");
  }
  const auto minority = static_cast<std::size_t>(
      std::llround(static_cast<double>(n_total) / (1.0 + imbalance_ratio)));
  if (minority < 1 || minority >= n_total) {
    throw std::invalid_argument("make_hypercube_clusters: imbalance ratio " +
                                std::to_string(imbalance_ratio) + " is impossible for n_total=" +
                                std::to_string(n_total));
  }
  const std::size_t majority = n_total - minority;

  std::vector<std::vector<double>> vertices[2];
  for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
    std::vector<double> v(dim);
    int bits = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      if (mask & (std::size_t{1} << j)) {
        v[j] = side;
        ++bits;
      }
    }
    vertices[bits % 2].push_back(std::move(v));
  }

  Rng rng(seed);
  LabeledDataset ds;
  ds.points = Matrix(n_total, dim);
  ds.labels.reserve(n_total);
  std::size_t r = 0;
  const std::size_t counts[2] = {majority, minority};
  for (int cls = 0; cls < 2; ++cls) {
    const auto& verts = vertices[cls];
    for (std::size_t i = 0; i < counts[cls]; ++i, ++r) {
      const auto& centre = verts[i % verts.size()];
      for (std::size_t j = 0; j < dim; ++j) ds.points(r, j) = centre[j] + sigma * rng.normal();
      ds.labels.push_back(cls);
    }
  }
  return ds;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  std::string out(s.substr(b, e - b));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
      current.push_back(ch);
    } else if (ch == ',' && !quoted) {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  fields.push_back(trim(current));
  return fields;
}

}  // namespace

CsvDataset read_csv(std::istream& in, const std::string& label_column,
                    const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) {
    throw std::runtime_error(source_name + ": empty file (a header row is required)");
  }
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
      static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
    line.erase(0, 3);
  }
  const auto header = split_fields(line);
  std::size_t label_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == label_column) {
      label_idx = i;
      break;
    }
  }
  if (label_idx == header.size()) {
    throw std::runtime_error(source_name + ": label column '" + label_column + "' not found in header");
  }

  CsvDataset out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i != label_idx) out.feature_names.push_back(header[i]);
  }
  std::unordered_map<std::string, int> codes;
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error(source_name + ": line " + std::to_string(line_no) + " has " +
                               std::to_string(fields.size()) + " fields, header has " +
                               std::to_string(header.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i == label_idx) continue;
      const std::string& cell = fields[i];
      double v = 0.0;
      const auto* first = cell.data();
      const auto* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (cell.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw std::runtime_error(source_name + ": invalid numeric value '" + cell + "' at row " +
                                 std::to_string(rows + 1) + " (line " + std::to_string(line_no) +
                                 "), column '" + header[i] + "'");
      }
      values.push_back(v);
    }
    const std::string& label = fields[label_idx];
    auto [it, inserted] = codes.emplace(label, static_cast<int>(out.label_names.size()));
    if (inserted) out.label_names.push_back(label);
    out.data.labels.push_back(it->second);
    ++rows;
  }
  if (rows == 0) throw std::runtime_error(source_name + ": no data rows");
  if (out.feature_names.empty()) throw std::runtime_error(source_name + ": no feature columns");

  const std::size_t d = out.feature_names.size();
  out.data.points = Matrix(rows, d);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < d; ++c) out.data.points(r, c) = values[r * d + c];
  }
  return out;
}

CsvDataset load_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_csv(in, label_column, path);
}

void write_csv(std::ostream& out, const LabeledDataset& ds, const std::string& label_column,
               const std::vector<std::string>& feature_names,
               const std::vector<std::string>& label_names) {
  for (std::size_t c = 0; c < ds.dim(); ++c) {
    out << (c < feature_names.size() ? feature_names[c] : "f" + std::to_string(c)) << ',';
  }
  out << label_column << '\n';
  char buf[32];
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (std::size_t c = 0; c < ds.dim(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.points(r, c));
      out << buf << ',';
    }
    const auto y = static_cast<std::size_t>(ds.labels[r]);
    if (y < label_names.size()) {
      out << label_names[y];
    } else {
      out << ds.labels[r];
    }
    out << '\n';
  }
}

SplitPair stratified_split(const LabeledDataset& ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("stratified_split: test_fraction must lie in (0, 1)");
  }
  ds.validate();
  SplitPair split;
  split.seed = seed;
  split.test_fraction = test_fraction;
  const int k = ds.num_classes();
  for (int c = 0; c < k; ++c) {
    auto members = ds.indices_of(c);
    if (members.size() < 2) {
      throw std::invalid_argument("stratified_split: class " + std::to_string(c) +
                                  " has a single member");
    }
    Rng rng(derive_seed(seed, "split/class/" + std::to_string(c)));
    rng.shuffle(std::span(members));
    auto n_test = static_cast<std::size_t>(
        std::llround(static_cast<double>(members.size()) * test_fraction));
    n_test = std::clamp<std::size_t>(n_test, 1, members.size() - 1);
    split.test_indices.insert(split.test_indices.end(), members.begin(), members.begin() + n_test);
    split.train_indices.insert(split.train_indices.end(), members.begin() + n_test, members.end());
  }
  std::sort(split.train_indices.begin(), split.train_indices.end());
  std::sort(split.test_indices.begin(), split.test_indices.end());
  split.train = ds.subset(split.train_indices);
  split.test = ds.subset(split.test_indices);
  return split;
}

std::vector<Fold> stratified_kfold(const LabeledDataset& ds, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("stratified_kfold: need at least 2 folds");
  ds.validate();
  std::vector<std::vector<std::size_t>> buckets(folds);
  const int k = ds.num_classes();
  std::size_t offset = 0;
  for (int c = 0; c < k; ++c) {
    auto members = ds.indices_of(c);
    Rng rng(derive_seed(seed, "kfold/class/" + std::to_string(c)));
    rng.shuffle(std::span(members));
    for (std::size_t i = 0; i < members.size(); ++i) {
      buckets[(offset + i) % folds].push_back(members[i]);
    }
    offset += members.size();
  }
  std::vector<Fold> out(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    out[f].test_indices = buckets[f];
    for (std::size_t g = 0; g < folds; ++g) {
      if (g != f) {
        out[f].train_indices.insert(out[f].train_indices.end(), buckets[g].begin(), buckets[g].end());
      }
    }
    std::sort(out[f].test_indices.begin(), out[f].test_indices.end());
    std::sort(out[f].train_indices.begin(), out[f].train_indices.end());
  }
  return out;
}

}  // namespace tpskit
