#include "samo/srva.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "samo/pareto.hpp"

namespace samo::srva {

Mat select_reference_solutions(const Mat& front_norm, const Mat& samples_norm,
                               int n_ref) {
  if (front_norm.empty()) {
    throw std::invalid_argument("select_reference_solutions: empty front");
  }
  const std::size_t n_cand = front_norm.size();
  // min distance from each candidate to Lambda + samples, updated as we pick
  Vec min_dist(n_cand, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n_cand; ++i) {
    for (const Vec& f : samples_norm) {
      min_dist[i] = std::min(min_dist[i], squared_distance(front_norm[i], f));
    }
  }
  std::vector<bool> taken(n_cand, false);
  std::vector<std::size_t> picks;
  const std::size_t want =
      std::min<std::size_t>(static_cast<std::size_t>(n_ref), n_cand);
  for (std::size_t p = 0; p < want; ++p) {
    std::size_t best = n_cand;
    for (std::size_t i = 0; i < n_cand; ++i) {
      if (taken[i]) continue;
      if (best == n_cand || min_dist[i] > min_dist[best]) best = i;
    }
    taken[best] = true;
    picks.push_back(best);
    for (std::size_t i = 0; i < n_cand; ++i) {
      if (!taken[i]) {
        min_dist[i] =
            std::min(min_dist[i], squared_distance(front_norm[i], front_norm[best]));
      }
    }
  }
  Mat out;
  out.reserve(static_cast<std::size_t>(n_ref));
  for (std::size_t i : picks) out.push_back(front_norm[i]);
  if (out.size() < static_cast<std::size_t>(n_ref)) {
    std::cerr << "[samo] reference-vector shortfall: " << out.size()
              << " estimated-front points for " << n_ref
              << " vectors; cycling picks\n";
    std::size_t i = 0;
    while (out.size() < static_cast<std::size_t>(n_ref)) {
      out.push_back(out[i % picks.size()]);
      ++i;
    }
  }
  return out;
}

namespace {

struct Kmeans {
  Mat centroids;
  std::vector<int> labels;
};

std::size_t nearest_centroid(const Vec& p, const Mat& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// Farthest point from the current centroid set; deterministic ties.
std::size_t farthest_point(const Mat& pts, const Mat& centroids) {
  std::size_t best = 0;
  double best_d = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double d = std::numeric_limits<double>::infinity();
    for (const Vec& c : centroids) d = std::min(d, squared_distance(pts[i], c));
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

Kmeans kmeans(const Mat& pts, int k, Rng& rng, int max_iter = 100,
              double tol = 1e-6) {
  Kmeans km;
  const std::size_t n = pts.size();
  const std::size_t M = pts[0].size();
  // k-means++ seeding
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  km.centroids.push_back(pts[first(rng)]);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Vec d2(n);
  while (km.centroids.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::numeric_limits<double>::infinity();
      for (const Vec& c : km.centroids) {
        d2[i] = std::min(d2[i], squared_distance(pts[i], c));
      }
      total += d2[i];
    }
    if (total <= 0.0) {
      km.centroids.push_back(pts[first(rng)]);
      continue;
    }
    double r = uni(rng) * total;
    std::size_t chosen = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      r -= d2[i];
      if (r <= 0.0) {
        chosen = i;
        break;
      }
    }
    km.centroids.push_back(pts[chosen]);
  }

  km.labels.assign(n, 0);
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      km.labels[i] = static_cast<int>(nearest_centroid(pts[i], km.centroids));
    }
    Mat next(static_cast<std::size_t>(k), Vec(M, 0.0));
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(km.labels[i]);
      for (std::size_t kk = 0; kk < M; ++kk) next[c][kk] += pts[i][kk];
      ++counts[c];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // re-seed empty cluster at the farthest point
        next[c] = pts[farthest_point(pts, km.centroids)];
      } else {
        for (std::size_t kk = 0; kk < M; ++kk) {
          next[c][kk] /= static_cast<double>(counts[c]);
        }
      }
    }
    double movement = 0.0;
    for (int c = 0; c < k; ++c) {
      movement = std::max(movement, squared_distance(next[c], km.centroids[c]));
    }
    km.centroids = std::move(next);
    if (std::sqrt(movement) < tol) break;
  }
  for (std::size_t i = 0; i < n; ++i) {
    km.labels[i] = static_cast<int>(nearest_centroid(pts[i], km.centroids));
  }
  return km;
}

}  // namespace

std::vector<int> cluster_reference_solutions(const Mat& selected, int n_add,
                                             Rng& rng) {
  if (selected.empty() || n_add < 1) {
    throw std::invalid_argument("cluster_reference_solutions: bad input");
  }
  const std::size_t n = selected.size();
  if (n_add == 1) return std::vector<int>(n, 0);

  constexpr double kTol = 1e-12;
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < n; ++i) {
    bool ok = true;
    for (double v : selected[i]) {
      if (v < -kTol || v > 1.0 + kTol) {
        ok = false;
        break;
      }
    }
    if (ok) inside.push_back(i);
  }
  if (inside.empty()) {
    std::cerr << "[samo] k-means: no member inside the normalized hypercube; "
                 "clustering all members\n";
    inside.resize(n);
    for (std::size_t i = 0; i < n; ++i) inside[i] = i;
  }

  Mat pts;
  pts.reserve(inside.size());
  for (std::size_t i : inside) pts.push_back(selected[i]);

  Mat centroids;
  std::vector<int> inside_labels;
  if (pts.size() >= static_cast<std::size_t>(n_add)) {
    Kmeans km = kmeans(pts, n_add, rng);
    centroids = std::move(km.centroids);
    inside_labels = std::move(km.labels);
  } else {
    // fewer inside members than clusters: seed centroids from the inside
    // members, then re-seed the rest from the outside members farthest away
    centroids = pts;
    Mat outside;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(inside.begin(), inside.end(), i) == inside.end()) {
        outside.push_back(selected[i]);
      }
    }
    while (centroids.size() < static_cast<std::size_t>(n_add) &&
           !outside.empty()) {
      const std::size_t far = farthest_point(outside, centroids);
      centroids.push_back(outside[far]);
      outside.erase(outside.begin() + static_cast<std::ptrdiff_t>(far));
    }
    while (centroids.size() < static_cast<std::size_t>(n_add)) {
      centroids.push_back(centroids[centroids.size() % pts.size()]);
    }
    inside_labels.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      inside_labels[i] = static_cast<int>(nearest_centroid(pts[i], centroids));
    }
  }

  std::vector<int> labels(n, -1);
  for (std::size_t idx = 0; idx < inside.size(); ++idx) {
    labels[inside[idx]] = inside_labels[idx];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0) {
      labels[i] = static_cast<int>(nearest_centroid(selected[i], centroids));
    }
  }

  // Backfill any unused label so selection sees one candidate per cluster:
  // move a duplicate-rich cluster's member over.
  if (n >= static_cast<std::size_t>(n_add)) {
    std::vector<std::vector<std::size_t>> members(
        static_cast<std::size_t>(n_add));
    for (std::size_t i = 0; i < n; ++i) {
      members[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    for (int c = 0; c < n_add; ++c) {
      if (!members[static_cast<std::size_t>(c)].empty()) continue;
      std::size_t big = 0;
      for (std::size_t b = 1; b < members.size(); ++b) {
        if (members[b].size() > members[big].size()) big = b;
      }
      const std::size_t moved = members[big].back();
      members[big].pop_back();
      labels[moved] = c;
      members[static_cast<std::size_t>(c)].push_back(moved);
    }
  }
  return labels;
}

ReferenceVectorSet to_unit_vectors(const Mat& selected,
                                   std::vector<int> cluster) {
  ReferenceVectorSet out;
  out.cluster = std::move(cluster);
  out.vectors.reserve(selected.size());
  const std::size_t M = selected.empty() ? 0 : selected[0].size();
  const double uniform = 1.0 / std::sqrt(static_cast<double>(M));
  for (const Vec& f : selected) {
    Vec v(M);
    double norm = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
      v[k] = std::max(f[k], 0.0);  // clamp float dust below the utopia
      norm += v[k] * v[k];
    }
    norm = std::sqrt(norm);
    if (norm < 1e-9) {
      std::cerr << "[samo] zero-norm reference solution replaced by the "
                   "uniform direction\n";
      std::fill(v.begin(), v.end(), uniform);
    } else {
      for (double& val : v) val /= norm;
    }
    out.vectors.push_back(std::move(v));
  }
  return out;
}

ReferenceVectorSet sld_reference_set(int M, int H1, int H2, int n_add,
                                     Rng& rng) {
  const Mat simplex = pareto::two_layer_sld(M, H1, H2);
  std::vector<int> labels = cluster_reference_solutions(simplex, n_add, rng);
  ReferenceVectorSet out = to_unit_vectors(simplex, std::move(labels));
  out.adaptive = false;
  return out;
}

}  // namespace samo::srva
