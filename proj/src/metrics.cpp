#include "samo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace samo::metrics {

namespace {

// 2-D staircase sweep; handles dominated projections.
double hv2d(Mat& pts, double ref0, double ref1) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    return a[1] < b[1];
  });
  double vol = 0.0;
  double cur1 = ref1;
  for (const Vec& p : pts) {
    if (p[1] < cur1) {
      vol += (ref0 - p[0]) * (cur1 - p[1]);
      cur1 = p[1];
    }
  }
  return vol;
}

double hv_sweep(const Mat& pts, const Vec& ref, std::size_t d) {
  if (pts.empty()) return 0.0;
  if (d == 1) {
    double lo = pts[0][0];
    for (const Vec& p : pts) lo = std::min(lo, p[0]);
    return ref[0] - lo;
  }
  if (d == 2) {
    Mat copy(pts.begin(), pts.end());
    return hv2d(copy, ref[0], ref[1]);
  }
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pts[a][d - 1] < pts[b][d - 1];
  });
  Vec sub_ref(ref.begin(), ref.begin() + d - 1);
  Mat prefix;
  prefix.reserve(pts.size());
  double vol = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Vec& p = pts[order[i]];
    prefix.emplace_back(p.begin(), p.begin() + d - 1);
    const double z_lo = p[d - 1];
    const double z_hi =
        (i + 1 < order.size()) ? pts[order[i + 1]][d - 1] : ref[d - 1];
    if (z_hi > z_lo) {
      vol += hv_sweep(prefix, sub_ref, d - 1) * (z_hi - z_lo);
    }
  }
  return vol;
}

Mat clip_to_ref(const Mat& points, const Vec& ref) {
  Mat kept;
  for (const Vec& p : points) {
    bool inside = true;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      if (p[k] >= ref[k]) {
        inside = false;
        break;
      }
    }
    if (inside) kept.push_back(p);
  }
  return kept;
}

}  // namespace

double hypervolume_exact(const Mat& points, const Vec& ref) {
  Mat kept = clip_to_ref(points, ref);
  if (kept.empty()) return 0.0;
  return hv_sweep(kept, ref, ref.size());
}

McEstimate hypervolume_mc(const Mat& points, const Vec& ref,
                          long long samples, std::uint64_t seed,
                          const Vec* lower, Exec exec) {
  const std::size_t M = ref.size();
  Mat kept = clip_to_ref(points, ref);
  if (kept.empty() || samples <= 0) return {};

  Vec lo(M);
  for (std::size_t k = 0; k < M; ++k) {
    double mn = kept[0][k];
    for (const Vec& p : kept) mn = std::min(mn, p[k]);
    lo[k] = (lower && k < lower->size()) ? std::min((*lower)[k], mn) : mn;
  }
  double box = 1.0;
  for (std::size_t k = 0; k < M; ++k) box *= ref[k] - lo[k];
  if (box <= 0.0) return {};

  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  constexpr long long kChunk = 65536;
  std::vector<double> draws(static_cast<std::size_t>(kChunk) * M);
  std::vector<unsigned char> hit(kChunk);
  long long dominated = 0;
  long long done = 0;
  while (done < samples) {
    const long long count = std::min(kChunk, samples - done);
    for (long long i = 0; i < count * static_cast<long long>(M); ++i) {
      draws[static_cast<std::size_t>(i)] = uni(rng);
    }
    for_each_index(static_cast<std::size_t>(count), exec, [&](std::size_t i) {
      const double* u = draws.data() + i * M;
      unsigned char any = 0;
      for (const Vec& p : kept) {
        bool dom = true;
        for (std::size_t k = 0; k < M; ++k) {
          const double s = lo[k] + u[k] * (ref[k] - lo[k]);
          if (p[k] > s) {
            dom = false;
            break;
          }
        }
        if (dom) {
          any = 1;
          break;
        }
      }
      hit[i] = any;
    });
    for (long long i = 0; i < count; ++i) dominated += hit[static_cast<std::size_t>(i)];
    done += count;
  }
  const double phat =
      static_cast<double>(dominated) / static_cast<double>(samples);
  McEstimate est;
  est.value = box * phat;
  est.std_error =
      box * std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
  return est;
}

double hypervolume(const Mat& points, const Vec& ref, long long mc_samples,
                   std::uint64_t mc_seed, const Vec* mc_lower, Exec exec) {
  if (ref.size() <= 4) return hypervolume_exact(points, ref);
  return hypervolume_mc(points, ref, mc_samples, mc_seed, mc_lower, exec).value;
}

double igd_plus(const Mat& points, const Mat& refs, Exec exec) {
  if (refs.empty()) throw std::invalid_argument("igd_plus: empty reference set");
  if (points.empty()) return std::numeric_limits<double>::infinity();
  Vec per_ref(refs.size());
  for_each_index(refs.size(), exec, [&](std::size_t i) {
    const Vec& z = refs[i];
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& a : points) {
      double s = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k) {
        const double d = std::max(a[k] - z[k], 0.0);
        s += d * d;
      }
      best = std::min(best, s);
    }
    per_ref[i] = std::sqrt(best);
  });
  double sum = 0.0;
  for (double v : per_ref) sum += v;
  return sum / static_cast<double>(refs.size());
}

Summary summarize(const Vec& values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  Summary s;
  s.min = s.max = values[0];
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() == 1) {
    std::cerr << "[samo] summarize: single value, std reported as 0\n";
    s.stddev = 0.0;
    return s;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return s;
}

}  // namespace samo::metrics
