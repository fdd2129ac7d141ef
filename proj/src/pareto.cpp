#include "samo/pareto.hpp"

#include <algorithm>
#include <cmath>

namespace samo::pareto {

bool dominates(const Vec& a, const Vec& b) {
  bool strict = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) return false;
    if (a[k] < b[k]) strict = true;
  }
  return strict;
}

bool strictly_dominates(const Vec& a, const Vec& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] >= b[k]) return false;
  }
  return true;
}

namespace {

// -1: b dominates a, +1: a dominates b, 0: incomparable or equal.
int dominance_compare(const Vec& a, const Vec& b) {
  bool a_better = false, b_better = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < b[k]) a_better = true;
    else if (b[k] < a[k]) b_better = true;
    if (a_better && b_better) return 0;
  }
  if (a_better) return 1;
  if (b_better) return -1;
  return 0;
}

}  // namespace

std::vector<std::vector<std::size_t>> nondominated_fronts(const Mat& F) {
  const std::size_t n = F.size();
  std::vector<std::vector<std::size_t>> fronts;
  if (n == 0) return fronts;
  std::vector<std::vector<std::size_t>> dominated_by(n);
  std::vector<int> dominator_count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int c = dominance_compare(F[i], F[j]);
      if (c > 0) {
        dominated_by[i].push_back(j);
        ++dominator_count[j];
      } else if (c < 0) {
        dominated_by[j].push_back(i);
        ++dominator_count[i];
      }
    }
  }
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i) {
    if (dominator_count[i] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    fronts.push_back(current);
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      for (std::size_t j : dominated_by[i]) {
        if (--dominator_count[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    current = std::move(next);
  }
  return fronts;
}

std::vector<int> nondominated_sort(const Mat& F) {
  std::vector<int> rank(F.size(), 0);
  const auto fronts = nondominated_fronts(F);
  for (std::size_t level = 0; level < fronts.size(); ++level) {
    for (std::size_t i : fronts[level]) rank[i] = static_cast<int>(level) + 1;
  }
  return rank;
}

std::vector<std::size_t> nondominated_indices(const Mat& F) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < F.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < F.size() && !dominated; ++j) {
      if (j != i && dominates(F[j], F[i])) dominated = true;
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> weakly_nondominated_indices(const Mat& F) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < F.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < F.size() && !dominated; ++j) {
      if (j != i && strictly_dominates(F[j], F[i])) dominated = true;
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

Mat epsilon_dominance_filter(const Mat& F, double eps) {
  if (F.size() <= 1) return F;
  const std::size_t M = F[0].size();
  Vec lo(M), hi(M);
  for (std::size_t k = 0; k < M; ++k) {
    lo[k] = hi[k] = F[0][k];
  }
  for (const Vec& f : F) {
    for (std::size_t k = 0; k < M; ++k) {
      lo[k] = std::min(lo[k], f[k]);
      hi[k] = std::max(hi[k], f[k]);
    }
  }
  Mat norm(F.size(), Vec(M));
  for (std::size_t i = 0; i < F.size(); ++i) {
    for (std::size_t k = 0; k < M; ++k) {
      const double range = hi[k] - lo[k];
      norm[i][k] = range > 0.0 ? (F[i][k] - lo[k]) / range : 0.0;
    }
  }
  std::vector<bool> alive(F.size(), true);
  Vec shifted(M);
  for (std::size_t i = 0; i < F.size(); ++i) {
    for (std::size_t j = 0; j < F.size(); ++j) {
      if (j == i || !alive[j]) continue;
      for (std::size_t k = 0; k < M; ++k) shifted[k] = norm[j][k] - eps;
      if (dominates(shifted, norm[i])) {
        alive[i] = false;
        break;
      }
    }
  }
  Mat out;
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (alive[i]) out.push_back(F[i]);
  }
  return out;
}

NadirUtopia estimate_nadir_utopia(const Mat& filtered, double eps,
                                  const Vec& fallback_range) {
  if (filtered.empty()) {
    throw std::invalid_argument("estimate_nadir_utopia: empty set");
  }
  const std::size_t M = filtered[0].size();
  NadirUtopia nu{Vec(M), Vec(M)};
  for (std::size_t k = 0; k < M; ++k) {
    double lo = filtered[0][k], hi = filtered[0][k];
    for (const Vec& f : filtered) {
      lo = std::min(lo, f[k]);
      hi = std::max(hi, f[k]);
    }
    double range = hi - lo;
    if (range <= 0.0) {
      range = (k < fallback_range.size() && fallback_range[k] > 0.0)
                  ? fallback_range[k]
                  : 1.0;
    }
    nu.nadir[k] = hi + eps * range;
    nu.utopia[k] = lo - eps * range;
  }
  return nu;
}

Vec normalize(const Vec& f, const NadirUtopia& nu) {
  Vec out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    out[k] = (f[k] - nu.utopia[k]) / (nu.nadir[k] - nu.utopia[k]);
  }
  return out;
}

Mat normalize(const Mat& F, const NadirUtopia& nu) {
  Mat out;
  out.reserve(F.size());
  for (const Vec& f : F) out.push_back(normalize(f, nu));
  return out;
}

Vec denormalize(const Vec& fn, const NadirUtopia& nu) {
  Vec out(fn.size());
  for (std::size_t k = 0; k < fn.size(); ++k) {
    out[k] = nu.utopia[k] + fn[k] * (nu.nadir[k] - nu.utopia[k]);
  }
  return out;
}

namespace {

void sld_recursive(Mat& out, Vec& current, int M, int left, int H, int pos) {
  if (pos == M - 1) {
    current[pos] = static_cast<double>(left) / H;
    out.push_back(current);
    return;
  }
  for (int i = 0; i <= left; ++i) {
    current[pos] = static_cast<double>(i) / H;
    sld_recursive(out, current, M, left - i, H, pos + 1);
  }
}

}  // namespace

Mat sld_vectors(int M, int H) {
  if (M < 2 || H < 1) {
    throw std::invalid_argument("sld_vectors needs M >= 2 and H >= 1");
  }
  Mat out;
  Vec current(M);
  sld_recursive(out, current, M, H, H, 0);
  return out;
}

Mat two_layer_sld(int M, int H1, int H2) {
  Mat out = sld_vectors(M, H1);
  if (H2 > 0) {
    Mat inner = sld_vectors(M, H2);
    for (Vec& w : inner) {
      for (double& v : w) v = (v + 1.0 / M) / 2.0;
      out.push_back(w);
    }
  }
  return out;
}

}  // namespace samo::pareto
