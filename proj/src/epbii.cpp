#include "samo/epbii.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "samo/doe.hpp"

namespace samo::epbii {

PbiValue pbi(const Vec& f_norm, const Vec& lambda, double theta_pbi) {
  PbiValue out;
  double dot = 0.0;
  for (std::size_t k = 0; k < f_norm.size(); ++k) dot += f_norm[k] * lambda[k];
  out.d1 = std::abs(dot);
  double d2 = 0.0;
  for (std::size_t k = 0; k < f_norm.size(); ++k) {
    const double diff = f_norm[k] - out.d1 * lambda[k];
    d2 += diff * diff;
  }
  out.d2 = std::sqrt(d2);
  out.g = out.d1 + theta_pbi * out.d2;
  return out;
}

double territory(const Vec& f_norm, const Vec& lambda, double theta_ref) {
  const PbiValue v = pbi(f_norm, lambda, 0.0);
  return v.d1 - theta_ref * v.d2;
}

TerritoryContext compute_theta_ref(const srva::ReferenceVectorSet& refs) {
  const std::size_t n = refs.vectors.size();
  if (n < 2) {
    throw std::invalid_argument("compute_theta_ref: need at least 2 vectors");
  }
  TerritoryContext ctx;
  // project onto the hyperplane where components sum to one
  Mat projected(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (double v : refs.vectors[i]) sum += v;
    Vec p = refs.vectors[i];
    for (double& v : p) v /= sum;
    projected[i] = std::move(p);
  }
  ctx.d_ij.assign(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::sqrt(squared_distance(projected[i], projected[j]));
      ctx.d_ij[i][j] = ctx.d_ij[j][i] = d;
    }
  }
  double sum = 0.0;
  std::size_t counted = 0;
  bool warned = false;
  for (std::size_t i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) nearest = std::min(nearest, ctx.d_ij[i][j]);
    }
    if (nearest <= 0.0) {
      if (!warned) {
        std::cerr << "[samo] duplicate projected reference vectors excluded "
                     "from d_min\n";
        warned = true;
      }
      continue;
    }
    sum += nearest;
    ++counted;
  }
  if (counted == 0) {
    std::cerr << "[samo] all reference vectors project to duplicates; using "
                 "narrow-territory fallback\n";
    ctx.theta_ref = 10.0 * std::sqrt(2.0);
    ctx.d_min = std::sqrt(2.0) / ctx.theta_ref;
    return ctx;
  }
  ctx.d_min = sum / static_cast<double>(counted);
  ctx.theta_ref = std::sqrt(2.0) / ctx.d_min;
  return ctx;
}

void compute_reference_pbi(const Mat& samples_norm,
                           const srva::ReferenceVectorSet& refs,
                           double theta_pbi, TerritoryContext& ctx) {
  const std::size_t n = refs.vectors.size();
  ctx.g_ref.assign(n, 0.0);
  ctx.territory_members.assign(n, {});
  // global fallback for empty territories
  double global_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& lambda = refs.vectors[i];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples_norm.size(); ++s) {
      const PbiValue v = pbi(samples_norm[s], lambda, theta_pbi);
      if (v.d1 - ctx.theta_ref * v.d2 >= 0.0) {
        ctx.territory_members[i].push_back(s);
        best = std::min(best, v.g);
      }
      global_min = std::min(global_min, v.g);
    }
    ctx.g_ref[i] = best;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(ctx.g_ref[i])) ctx.g_ref[i] = global_min;
  }
}

McSampleBlock make_mc_block(int count, int M, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("mc block needs count >= 1");
  McSampleBlock block;
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  block.z.assign(static_cast<std::size_t>(count), Vec(M));
  for (auto& row : block.z) {
    for (double& v : row) v = normal(rng);
  }
  return block;
}

Vec prediction_payload(const Vec& x, const std::vector<kriging::Model>& models,
                       const pareto::NadirUtopia& nu) {
  const std::size_t M = models.size();
  Vec payload(2 * M);
  for (std::size_t k = 0; k < M; ++k) {
    const kriging::Prediction p = models[k].predict(x);
    const double range = nu.nadir[k] - nu.utopia[k];
    payload[k] = (p.mean - nu.utopia[k]) / range;
    payload[M + k] = std::sqrt(std::max(p.variance, 0.0)) / range;
  }
  return payload;
}

Mat payload_batch(const Mat& X, const std::vector<kriging::Model>& models,
                  const pareto::NadirUtopia& nu, Exec exec) {
  Mat out(X.size());
  for_each_index(X.size(), exec, [&](std::size_t i) {
    out[i] = prediction_payload(X[i], models, nu);
  });
  return out;
}

namespace {

inline void pbi_raw(const double* f, const double* lambda, std::size_t M,
                    double& d1, double& d2) {
  double dot = 0.0;
  for (std::size_t k = 0; k < M; ++k) dot += f[k] * lambda[k];
  d1 = std::abs(dot);
  double s = 0.0;
  for (std::size_t k = 0; k < M; ++k) {
    const double diff = f[k] - d1 * lambda[k];
    s += diff * diff;
  }
  d2 = std::sqrt(s);
}

}  // namespace

double epbii_from_payload(const Vec& payload, const Vec& lambda, double g_ref,
                          double theta_pbi, double theta_ref,
                          const McSampleBlock& mc) {
  const std::size_t M = lambda.size();
  if (M > 64) throw std::invalid_argument("epbii: objective count above 64");
  const double* mean = payload.data();
  const double* sd = payload.data() + M;
  double d1 = 0.0, d2 = 0.0;
  pbi_raw(mean, lambda.data(), M, d1, d2);
  const double t_mean = d1 - theta_ref * d2;
  if (t_mean < 0.0) return t_mean;
  double sum = 0.0;
  double f[64];
  for (const Vec& z : mc.z) {
    for (std::size_t k = 0; k < M; ++k) f[k] = mean[k] + sd[k] * z[k];
    pbi_raw(f, lambda.data(), M, d1, d2);
    sum += std::max(g_ref - (d1 + theta_pbi * d2), 0.0);
  }
  return sum / static_cast<double>(mc.z.size());
}

double epbii_value(const Vec& x, const Vec& lambda, double g_ref,
                   const std::vector<kriging::Model>& models,
                   const pareto::NadirUtopia& nu, double theta_pbi,
                   const TerritoryContext& ctx, const McSampleBlock& mc) {
  return epbii_from_payload(prediction_payload(x, models, nu), lambda, g_ref,
                            theta_pbi, ctx.theta_ref, mc);
}

Candidates maximize_epbii(const srva::ReferenceVectorSet& refs,
                          const TerritoryContext& ctx,
                          const std::vector<kriging::Model>& models,
                          const pareto::NadirUtopia& nu, const Mat& front_x,
                          const Mat& front_f, const Bounds& bounds,
                          const MaximizeConfig& cfg) {
  const std::size_t n_ref = refs.vectors.size();
  const std::size_t M = models.size();
  const McSampleBlock mc = make_mc_block(cfg.mc_count, static_cast<int>(M),
                                         cfg.mc_seed);

  // Initial population: estimated-front point nearest (perpendicular
  // distance) to each reference vector; LHS fallback when the front is empty.
  Mat init_pop(n_ref);
  if (!front_x.empty()) {
    const Mat front_norm = pareto::normalize(front_f, nu);
    for (std::size_t i = 0; i < n_ref; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < front_norm.size(); ++j) {
        const PbiValue v = pbi(front_norm[j], refs.vectors[i], 0.0);
        if (v.d2 < best_d) {
          best_d = v.d2;
          best = j;
        }
      }
      init_pop[i] = front_x[best];
    }
  } else {
    std::cerr << "[samo] empty estimated front; seeding EPBII maximization "
                 "from a Latin hypercube\n";
    Rng rng = make_rng(cfg.moead.seed);
    init_pop = scale_to_bounds(
        latin_hypercube(static_cast<int>(n_ref), static_cast<int>(bounds.dim()),
                        rng),
        bounds);
  }

  ea::MoeadSubproblems sub;
  sub.count = n_ref;
  sub.prepare_batch = [&](const Mat& X) {
    return payload_batch(X, models, nu, cfg.exec);
  };
  sub.value = [&](std::size_t i, const Vec& payload) {
    return epbii_from_payload(payload, refs.vectors[i], ctx.g_ref[i],
                              cfg.theta_pbi, ctx.theta_ref, mc);
  };

  const ea::MoeadResult res =
      ea::run_moead(sub, init_pop, bounds, refs.vectors, cfg.moead);
  Candidates out;
  out.x = res.best_x;
  out.value = res.best_value;
  out.payload = res.best_payload;
  return out;
}

}  // namespace samo::epbii
