#include "tpskit/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace tpskit {

namespace {

struct BlobRecipe {
  const char* kind;
  std::vector<std::size_t> counts;
  std::vector<std::vector<double>> centers;
  double sigma;
};

// Centres and spreads are chosen to give the qualitative regimes of the
// benchmark roster (separated, overlapping, imbalanced); they are not fitted
// to any published instance.
const std::vector<BlobRecipe>& blob_recipes() {
  static const std::vector<BlobRecipe> recipes = {
      {"well-separated", {200, 200, 200}, {{0.0, 0.0}, {10.0, 0.0}, {5.0, 8.66}}, 1.0},
      {"overlapping-blobs", {200, 200, 200, 200}, {{0.0, 0.0}, {3.0, 0.0}, {0.0, 3.0}, {3.0, 3.0}}, 1.2},
      {"overlapping-clusters", {200, 200, 200}, {{0.0, 0.0}, {2.0, 0.0}, {1.0, 1.7}}, 1.2},
      {"imbalanced", {400, 100}, {{0.0, 0.0}, {2.5, 0.0}}, 1.0},
      {"mixed", {400, 300, 100}, {{0.0, 0.0}, {4.0, 0.0}, {2.0, 3.5}}, 1.2},
  };
  return recipes;
}

const BlobRecipe* find_blob(const std::string& kind) {
  for (const auto& r : blob_recipes()) {
    if (kind == r.kind) return &r;
  }
  return nullptr;
}

// Scales the recipe counts to n, keeping proportions; the remainder from
// rounding goes to the first class.
std::vector<std::size_t> scale_counts(const std::vector<std::size_t>& counts, std::size_t n) {
  std::size_t base = 0;
  for (auto c : counts) base += c;
  if (n == base) return counts;
  std::vector<std::size_t> out(counts.size());
  std::size_t assigned = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    out[i] = static_cast<std::size_t>(std::llround(static_cast<double>(counts[i]) * n / base));
    if (out[i] == 0) throw std::invalid_argument("generate: n=" + std::to_string(n) + " is too small for this kind");
    assigned += out[i];
  }
  if (assigned >= n) throw std::invalid_argument("generate: n=" + std::to_string(n) + " is too small for this kind");
  out[0] = n - assigned;
  return out;
}

}  // namespace

const std::vector<std::string>& dataset_kinds() {
  static const std::vector<std::string> kinds = {"moons",      "circles", "well-separated",
                                                 "overlapping-blobs", "overlapping-clusters",
                                                 "imbalanced", "mixed",   "hypercube"};
  return kinds;
}

GeneratorSpec resolve(GeneratorSpec s) {
  if (s.kind == "moons" || s.kind == "circles") {
    if (s.n == 0) s.n = 500;
    if (s.noise < 0.0) s.noise = noise_sigma(NoiseLevel::moderate);
    if (s.kind == "circles" && s.factor == 0.0) s.factor = 0.5;
  } else if (s.kind == "hypercube") {
    if (s.n == 0) s.n = 2500;
    if (s.dim == 0) s.dim = 4;
    if (s.side == 0.0) s.side = 2.0;
    if (s.sigma == 0.0) s.sigma = 1.0;
    if (s.ratio == 0.0) s.ratio = 4.0;
  } else if (const auto* r = find_blob(s.kind)) {
    if (s.n == 0) {
      for (auto c : r->counts) s.n += c;
    }
    if (s.sigma == 0.0) s.sigma = r->sigma;
  } else {
    std::string known;
    for (const auto& k : dataset_kinds()) known += (known.empty() ? "" : ", ") + k;
    throw std::invalid_argument("unknown dataset kind '" + s.kind + "' (expected one of " + known + ")");
  }
  return s;
}

LabeledDataset make_dataset(const GeneratorSpec& spec) {
  const GeneratorSpec s = resolve(spec);
  if (s.kind == "moons") return make_moons(s.n, s.noise, s.seed);
  if (s.kind == "circles") return make_circles(s.n, s.noise, s.factor, s.seed);
  if (s.kind == "hypercube") return make_hypercube_clusters(s.n, s.dim, s.side, s.sigma, s.ratio, s.seed);
  const auto* r = find_blob(s.kind);
  return make_blobs(scale_counts(r->counts, s.n), r->centers, s.sigma, s.seed);
}

}  // namespace tpskit
