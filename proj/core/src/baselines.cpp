#include "tpskit/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tpskit/neighbors.hpp"
#include "tpskit/rng.hpp"

namespace tpskit {

std::string to_string(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::cnn: return "cnn";
    case BaselineMethod::enn: return "enn";
    case BaselineMethod::cnn_enn: return "cnn_enn";
    case BaselineMethod::allknn: return "allknn";
    case BaselineMethod::kmeans: return "kmeans";
    case BaselineMethod::set_cover: return "set_cover";
  }
  return "unknown";
}

BaselineMethod parse_baseline_method(const std::string& name) {
  for (auto m : {BaselineMethod::cnn, BaselineMethod::enn, BaselineMethod::cnn_enn,
                 BaselineMethod::allknn, BaselineMethod::kmeans, BaselineMethod::set_cover}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown baseline method '" + name + "'");
}

namespace {

void reject_kmeans_metric(MetricKind metric) {
  if (metric == MetricKind::cosine) {
    throw std::invalid_argument(
        "kmeans does not support the cosine metric: cosine distance requires a transformation to "
        "spherical coordinates (spherical k-means); use --metric euclidean");
  }
  if (metric != MetricKind::euclidean) {
    throw std::invalid_argument("kmeans centroids minimise squared euclidean distance; metric " +
                                to_string(metric) + " is not supported");
  }
}

}  // namespace

void BaselineConfig::validate() const {
  switch (method) {
    case BaselineMethod::enn:
    case BaselineMethod::cnn_enn:
      if (k_edit < 1) throw std::invalid_argument("k_edit must be >= 1");
      break;
    case BaselineMethod::allknn:
      if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
      break;
    case BaselineMethod::kmeans:
      if (clusters_per_class < 1) throw std::invalid_argument("clusters_per_class must be >= 1");
      reject_kmeans_metric(metric);
      break;
    case BaselineMethod::set_cover:
      if (!(ball_radius > 0.0) || !std::isfinite(ball_radius)) {
        throw std::invalid_argument("ball_radius must be > 0");
      }
      break;
    case BaselineMethod::cnn: break;
  }
}

std::vector<std::size_t> cnn_select(const LabeledDataset& train, MetricKind metric,
                                    std::uint64_t seed) {
  train.validate();
  const std::size_t n = train.size();
  const int classes = train.num_classes();
  std::vector<char> in_store(n, 0);
  std::vector<std::size_t> store;

  Rng seed_rng(derive_seed(seed, "cnn/seeds"));
  for (int c = 0; c < classes; ++c) {
    const auto members = train.indices_of(c);
    const auto pick = members[static_cast<std::size_t>(seed_rng.below(members.size()))];
    in_store[pick] = 1;
    store.push_back(pick);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng order_rng(derive_seed(seed, "cnn/order"));
  order_rng.shuffle(std::span(order));

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i : order) {
      if (in_store[i]) continue;
      std::size_t best = kNoIndex;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t s : store) {
        const double dist = distance(train.points.row(i), train.points.row(s), metric);
        if (dist < best_d || (dist == best_d && s < best)) {
          best_d = dist;
          best = s;
        }
      }
      if (train.labels[best] != train.labels[i]) {
        in_store[i] = 1;
        store.push_back(i);
        changed = true;
      }
    }
  }
  std::sort(store.begin(), store.end());
  return store;
}

std::vector<std::size_t> enn_select(const LabeledDataset& train, std::size_t k_edit,
                                    MetricKind metric) {
  train.validate();
  if (k_edit < 1 || k_edit >= train.size()) {
    throw std::invalid_argument("enn_select: k_edit=" + std::to_string(k_edit) +
                                " must satisfy 1 <= k_edit < n=" + std::to_string(train.size()));
  }
  const auto d = pairwise_distances(train.points, metric);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto nn = nearest_in_row(d.values.row(i), k_edit, i);
    if (majority_label(nn, train.labels) == train.labels[i]) kept.push_back(i);
  }
  return kept;
}

std::vector<std::size_t> cnn_enn_select(const LabeledDataset& train, const BaselineConfig& cfg) {
  const auto condensed = cnn_select(train, cfg.metric, cfg.seed);
  if (condensed.size() <= cfg.k_edit) return condensed;
  const auto edited = enn_select(train.subset(condensed), cfg.k_edit, cfg.metric);
  if (edited.empty()) return condensed;
  std::vector<std::size_t> out;
  out.reserve(edited.size());
  for (auto local : edited) out.push_back(condensed[local]);
  return out;
}

std::vector<std::size_t> allknn_select(const LabeledDataset& train, std::size_t k_max,
                                       MetricKind metric) {
  train.validate();
  if (k_max < 1 || k_max >= train.size()) {
    throw std::invalid_argument("allknn_select: k_max=" + std::to_string(k_max) +
                                " must satisfy 1 <= k_max < n=" + std::to_string(train.size()));
  }
  const auto d = pairwise_distances(train.points, metric);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto nn = nearest_in_row(d.values.row(i), k_max, i);
    bool keep = true;
    for (std::size_t k = 1; k <= k_max && keep; ++k) {
      keep = majority_label(std::span(nn).first(k), train.labels) == train.labels[i];
    }
    if (keep) kept.push_back(i);
  }
  return kept;
}

namespace {

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

Matrix lloyd(const Matrix& pts, std::size_t clusters, Rng& rng) {
  const std::size_t n = pts.rows();
  const std::size_t dim = pts.cols();
  Matrix centers(clusters, dim);

  // k-means++ seeding.
  std::vector<double> nearest_sq(n, std::numeric_limits<double>::infinity());
  std::size_t first = static_cast<std::size_t>(rng.below(n));
  std::vector<char> chosen(n, 0);
  for (std::size_t c = 0; c < clusters; ++c) {
    std::size_t pick = first;
    if (c > 0) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += chosen[i] ? 0.0 : nearest_sq[i];
      if (total > 0.0) {
        double target = rng.uniform() * total;
        pick = kNoIndex;
        for (std::size_t i = 0; i < n; ++i) {
          if (chosen[i]) continue;
          target -= nearest_sq[i];
          pick = i;
          if (target < 0.0) break;
        }
      } else {
        // All remaining mass is zero (duplicates); take the first unchosen point.
        pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), 0) - chosen.begin());
      }
    }
    chosen[pick] = 1;
    auto dst = centers.row(c);
    std::copy(pts.row(pick).begin(), pts.row(pick).end(), dst.begin());
    for (std::size_t i = 0; i < n; ++i) {
      nearest_sq[i] = std::min(nearest_sq[i], squared_euclidean(pts.row(i), centers.row(c)));
    }
  }

  std::vector<std::size_t> assign(n, 0);
  double previous = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 100; ++iter) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < clusters; ++c) {
        const double s = squared_euclidean(pts.row(i), centers.row(c));
        if (s < best) {
          best = s;
          assign[i] = c;
        }
      }
      inertia += best;
    }
    Matrix sums(clusters, dim, 0.0);
    std::vector<std::size_t> counts(clusters, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[assign[i]];
      for (std::size_t k = 0; k < dim; ++k) sums(assign[i], k) += pts(i, k);
    }
    for (std::size_t c = 0; c < clusters; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centre
      for (std::size_t k = 0; k < dim; ++k) centers(c, k) = sums(c, k) / static_cast<double>(counts[c]);
    }
    if (std::isfinite(previous) && previous - inertia <= 1e-6 * std::max(previous, 1e-300)) break;
    previous = inertia;
  }
  return centers;
}

}  // namespace

LabeledDataset kmeans_select(const LabeledDataset& train, std::size_t clusters_per_class,
                             MetricKind metric, std::uint64_t seed) {
  reject_kmeans_metric(metric);
  train.validate();
  if (clusters_per_class < 1) throw std::invalid_argument("kmeans_select: clusters_per_class must be >= 1");
  const int classes = train.num_classes();
  std::vector<Matrix> per_class;
  std::size_t total = 0;
  for (int c = 0; c < classes; ++c) {
    const auto members = train.indices_of(c);
    if (clusters_per_class > members.size()) {
      throw std::invalid_argument("kmeans_select: " + std::to_string(clusters_per_class) +
                                  " clusters exceed the " + std::to_string(members.size()) +
                                  " points of class " + std::to_string(c));
    }
    Rng rng(derive_seed(seed, "kmeans/class/" + std::to_string(c)));
    per_class.push_back(lloyd(train.points.select_rows(members), clusters_per_class, rng));
    total += clusters_per_class;
  }
  LabeledDataset out;
  out.points = Matrix(total, train.dim());
  std::size_t r = 0;
  for (int c = 0; c < classes; ++c) {
    const auto& centers = per_class[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < centers.rows(); ++i, ++r) {
      std::copy(centers.row(i).begin(), centers.row(i).end(), out.points.row(r).begin());
      out.labels.push_back(c);
    }
  }
  return out;
}

std::vector<std::size_t> set_cover_select(const LabeledDataset& train, double ball_radius,
                                          MetricKind metric) {
  if (!(ball_radius > 0.0) || !std::isfinite(ball_radius)) {
    throw std::invalid_argument("set_cover_select: ball_radius must be > 0");
  }
  train.validate();
  const auto d = pairwise_distances(train.points, metric);
  const std::size_t n = train.size();
  std::vector<std::size_t> selected;
  for (int c = 0; c < train.num_classes(); ++c) {
    const auto members = train.indices_of(c);
    // Balls centred at class members that capture no other-class point.
    std::vector<std::vector<std::size_t>> covers;
    std::vector<std::size_t> centres;
    for (std::size_t p : members) {
      bool clean = true;
      for (std::size_t j = 0; j < n && clean; ++j) {
        clean = train.labels[j] == c || d(p, j) > ball_radius;
      }
      if (!clean) continue;
      std::vector<std::size_t> cov;
      for (std::size_t local = 0; local < members.size(); ++local) {
        if (d(p, members[local]) <= ball_radius) cov.push_back(local);
      }
      centres.push_back(p);
      covers.push_back(std::move(cov));
    }
    std::vector<char> covered(members.size(), 0);
    for (;;) {
      std::size_t best = kNoIndex, best_gain = 0;
      for (std::size_t b = 0; b < centres.size(); ++b) {
        std::size_t gain = 0;
        for (auto local : covers[b]) gain += covered[local] ? 0 : 1;
        if (gain > best_gain) {
          best_gain = gain;
          best = b;
        }
      }
      if (best == kNoIndex) break;
      selected.push_back(centres[best]);
      for (auto local : covers[best]) covered[local] = 1;
    }
    for (std::size_t local = 0; local < members.size(); ++local) {
      if (!covered[local]) selected.push_back(members[local]);
    }
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

Selection run_baseline(const LabeledDataset& train, const BaselineConfig& cfg) {
  cfg.validate();
  Selection out;
  const auto start = std::chrono::steady_clock::now();
  switch (cfg.method) {
    case BaselineMethod::cnn: out.indices = cnn_select(train, cfg.metric, cfg.seed); break;
    case BaselineMethod::enn: out.indices = enn_select(train, cfg.k_edit, cfg.metric); break;
    case BaselineMethod::cnn_enn: out.indices = cnn_enn_select(train, cfg); break;
    case BaselineMethod::allknn: out.indices = allknn_select(train, cfg.k_max, cfg.metric); break;
    case BaselineMethod::kmeans:
      out.synthetic = kmeans_select(train, cfg.clusters_per_class, cfg.metric, cfg.seed);
      break;
    case BaselineMethod::set_cover:
      out.indices = set_cover_select(train, cfg.ball_radius, cfg.metric);
      break;
  }
  out.selection_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace tpskit
