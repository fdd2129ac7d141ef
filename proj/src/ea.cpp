#include "samo/ea.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "samo/pareto.hpp"

namespace samo::ea {

namespace {

Mat random_population(int n, const Bounds& bounds, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Mat pop(n, Vec(bounds.dim()));
  for (auto& x : pop) {
    for (std::size_t k = 0; k < bounds.dim(); ++k) {
      x[k] = bounds.lower[k] + uni(rng) * (bounds.upper[k] - bounds.lower[k]);
    }
  }
  return pop;
}

double resolved_mutation_prob(const EAConfig& cfg, std::size_t m) {
  return cfg.mutation_prob < 0.0 ? 1.0 / static_cast<double>(m)
                                 : cfg.mutation_prob;
}

}  // namespace

void sbx_crossover(const Vec& p1, const Vec& p2, const Bounds& bounds,
                   double eta, double prob, Rng& rng, Vec& c1, Vec& c2) {
  c1 = p1;
  c2 = p2;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  if (uni(rng) > prob) return;
  for (std::size_t k = 0; k < p1.size(); ++k) {
    if (uni(rng) > 0.5) continue;
    const double y1 = p1[k], y2 = p2[k];
    if (std::abs(y1 - y2) < 1e-14) continue;
    const double u = uni(rng);
    const double beta =
        u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                 : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
    double a = 0.5 * ((1.0 + beta) * y1 + (1.0 - beta) * y2);
    double b = 0.5 * ((1.0 - beta) * y1 + (1.0 + beta) * y2);
    if (uni(rng) <= 0.5) std::swap(a, b);
    c1[k] = a;
    c2[k] = b;
  }
  bounds.clip(c1);
  bounds.clip(c2);
}

void polynomial_mutation(Vec& x, const Bounds& bounds, double eta, double prob,
                         Rng& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (uni(rng) > prob) continue;
    const double u = uni(rng);
    const double delta =
        u < 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0)) - 1.0
                : 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta + 1.0));
    x[k] += delta * (bounds.upper[k] - bounds.lower[k]);
  }
  bounds.clip(x);
}

BatchScalarFn batchify(std::function<double(const Vec&)> f, Exec exec) {
  return [f = std::move(f), exec](const Mat& X) {
    Vec out(X.size());
    for_each_index(X.size(), exec, [&](std::size_t i) { out[i] = f(X[i]); });
    return out;
  };
}

BatchVectorFn batchify_vec(std::function<Vec(const Vec&)> f, Exec exec) {
  return [f = std::move(f), exec](const Mat& X) {
    Mat out(X.size());
    for_each_index(X.size(), exec, [&](std::size_t i) { out[i] = f(X[i]); });
    return out;
  };
}

BestIndividual run_single_objective_ga(const BatchScalarFn& objective,
                                       const Bounds& bounds,
                                       const EAConfig& cfg) {
  const std::size_t m = bounds.dim();
  int pop_size = std::max(4, cfg.population);
  if (pop_size % 2 != 0) ++pop_size;
  const double pm = resolved_mutation_prob(cfg, m);
  Rng rng = make_rng(cfg.seed);
  std::uniform_int_distribution<int> pick(0, pop_size - 1);

  Mat pop = random_population(pop_size, bounds, rng);
  Vec vals = objective(pop);

  BestIndividual best;
  best.value = std::numeric_limits<double>::infinity();
  auto track_best = [&](const Mat& xs, const Vec& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (vs[i] < best.value) {
        best.value = vs[i];
        best.x = xs[i];
      }
    }
  };
  track_best(pop, vals);

  for (int gen = 0; gen < cfg.generations; ++gen) {
    Mat parents(pop_size);
    for (int i = 0; i < pop_size; ++i) {
      const int a = pick(rng), b = pick(rng);
      parents[i] = vals[a] <= vals[b] ? pop[a] : pop[b];
    }
    Mat children(pop_size);
    for (int i = 0; i < pop_size; i += 2) {
      sbx_crossover(parents[i], parents[i + 1], bounds, cfg.sbx_eta,
                    cfg.sbx_prob, rng, children[i], children[i + 1]);
      polynomial_mutation(children[i], bounds, cfg.mutation_eta, pm, rng);
      polynomial_mutation(children[i + 1], bounds, cfg.mutation_eta, pm, rng);
    }
    Vec cvals = objective(children);
    std::size_t worst = 0;
    for (std::size_t i = 1; i < cvals.size(); ++i) {
      if (cvals[i] > cvals[worst]) worst = i;
    }
    if (best.value < cvals[worst]) {
      children[worst] = best.x;
      cvals[worst] = best.value;
    }
    pop = std::move(children);
    vals = std::move(cvals);
    track_best(pop, vals);
  }
  return best;
}

namespace {

struct Association {
  std::size_t ref = 0;
  double dist = 0.0;
};

// Perpendicular distance from point to the ray through the origin along w.
double perpendicular_distance(const Vec& point, const Vec& w) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    num += w[k] * point[k];
    den += w[k] * w[k];
  }
  const double t = num / den;
  double d = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double diff = point[k] - t * w[k];
    d += diff * diff;
  }
  return std::sqrt(d);
}

// Deb-Jain normalization: translate by the ideal point, then divide by
// intercepts of the hyperplane through the extreme points (fallback to
// per-objective maxima when the system is degenerate).
Mat normalize_for_niching(const Mat& F, const std::vector<std::size_t>& st) {
  const std::size_t M = F[0].size();
  Vec ideal(M, std::numeric_limits<double>::infinity());
  for (std::size_t i : st) {
    for (std::size_t k = 0; k < M; ++k) ideal[k] = std::min(ideal[k], F[i][k]);
  }
  std::vector<std::size_t> extremes(M);
  for (std::size_t k = 0; k < M; ++k) {
    double best_asf = std::numeric_limits<double>::infinity();
    std::size_t best_i = st[0];
    for (std::size_t i : st) {
      double asf = 0.0;
      for (std::size_t kk = 0; kk < M; ++kk) {
        const double w = (kk == k) ? 1.0 : 1e-6;
        asf = std::max(asf, (F[i][kk] - ideal[kk]) / w);
      }
      if (asf < best_asf) {
        best_asf = asf;
        best_i = i;
      }
    }
    extremes[k] = best_i;
  }
  bool degenerate = false;
  for (std::size_t a = 0; a < M && !degenerate; ++a) {
    for (std::size_t b = a + 1; b < M; ++b) {
      if (extremes[a] == extremes[b]) {
        degenerate = true;
        break;
      }
    }
  }
  Vec intercepts(M, 0.0);
  if (!degenerate) {
    Eigen::MatrixXd E(M, M);
    for (std::size_t r = 0; r < M; ++r) {
      for (std::size_t k = 0; k < M; ++k) {
        E(static_cast<int>(r), static_cast<int>(k)) =
            F[extremes[r]][k] - ideal[k];
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(E);
    if (lu.isInvertible()) {
      Eigen::VectorXd a = lu.solve(Eigen::VectorXd::Ones(static_cast<int>(M)));
      for (std::size_t k = 0; k < M; ++k) {
        const double ak = a(static_cast<int>(k));
        if (!(ak > 1e-10) || !std::isfinite(ak)) {
          degenerate = true;
          break;
        }
        intercepts[k] = 1.0 / ak;
      }
    } else {
      degenerate = true;
    }
  }
  if (degenerate) {
    for (std::size_t k = 0; k < M; ++k) {
      double mx = 0.0;
      for (std::size_t i : st) mx = std::max(mx, F[i][k] - ideal[k]);
      intercepts[k] = mx > 1e-12 ? mx : 1.0;
    }
  }
  Mat normalized(F.size());
  for (std::size_t i : st) {
    Vec f(M);
    for (std::size_t k = 0; k < M; ++k) {
      const double denom = intercepts[k] > 1e-12 ? intercepts[k] : 1e-12;
      f[k] = (F[i][k] - ideal[k]) / denom;
    }
    normalized[i] = std::move(f);
  }
  return normalized;
}

std::vector<std::size_t> environmental_selection(const Mat& F, int capacity,
                                                 const Mat& refs, Rng& rng) {
  const auto fronts = pareto::nondominated_fronts(F);
  std::vector<std::size_t> chosen;
  std::size_t level = 0;
  while (level < fronts.size() &&
         chosen.size() + fronts[level].size() <=
             static_cast<std::size_t>(capacity)) {
    chosen.insert(chosen.end(), fronts[level].begin(), fronts[level].end());
    ++level;
  }
  if (chosen.size() == static_cast<std::size_t>(capacity) ||
      level >= fronts.size()) {
    return chosen;
  }
  const std::vector<std::size_t>& last = fronts[level];
  std::vector<std::size_t> st = chosen;
  st.insert(st.end(), last.begin(), last.end());

  const Mat normalized = normalize_for_niching(F, st);
  std::vector<Association> assoc(F.size());
  for_each_index(st.size(), Exec::Parallel, [&](std::size_t idx) {
    const std::size_t i = st[idx];
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < refs.size(); ++j) {
      const double d = perpendicular_distance(normalized[i], refs[j]);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    assoc[i] = {best_j, best};
  });

  std::vector<int> rho(refs.size(), 0);
  for (std::size_t i : chosen) ++rho[assoc[i].ref];

  std::vector<std::vector<std::size_t>> pool(refs.size());
  for (std::size_t i : last) pool[assoc[i].ref].push_back(i);

  std::vector<bool> excluded(refs.size(), false);
  const std::size_t want = static_cast<std::size_t>(capacity);
  while (chosen.size() < want) {
    int min_rho = std::numeric_limits<int>::max();
    for (std::size_t j = 0; j < refs.size(); ++j) {
      if (!excluded[j]) min_rho = std::min(min_rho, rho[j]);
    }
    std::vector<std::size_t> minimal;
    for (std::size_t j = 0; j < refs.size(); ++j) {
      if (!excluded[j] && rho[j] == min_rho) minimal.push_back(j);
    }
    std::uniform_int_distribution<std::size_t> pick_ref(0, minimal.size() - 1);
    const std::size_t j = minimal[pick_ref(rng)];
    auto& members = pool[j];
    if (members.empty()) {
      excluded[j] = true;
      continue;
    }
    std::size_t slot;
    if (rho[j] == 0) {
      slot = 0;
      for (std::size_t s = 1; s < members.size(); ++s) {
        if (assoc[members[s]].dist < assoc[members[slot]].dist) slot = s;
      }
    } else {
      std::uniform_int_distribution<std::size_t> pick_member(
          0, members.size() - 1);
      slot = pick_member(rng);
    }
    chosen.push_back(members[slot]);
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(slot));
    ++rho[j];
  }
  return chosen;
}

}  // namespace

FrontEstimate run_nsga3(const BatchVectorFn& objectives, const Bounds& bounds,
                        const Mat& reference_points, const EAConfig& cfg) {
  if (reference_points.empty()) {
    throw std::invalid_argument("run_nsga3: no reference points");
  }
  const std::size_t m = bounds.dim();
  const int N = cfg.population > 0
                    ? cfg.population
                    : static_cast<int>((reference_points.size() + 3) / 4 * 4);
  const double pm = resolved_mutation_prob(cfg, m);
  Rng rng = make_rng(cfg.seed);

  Mat pop = random_population(N, bounds, rng);
  Mat F = objectives(pop);

  std::vector<std::size_t> perm(static_cast<std::size_t>(N));
  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Mat children(N);
    for (int i = 0; i + 1 < N; i += 2) {
      sbx_crossover(pop[perm[i]], pop[perm[i + 1]], bounds, cfg.sbx_eta,
                    cfg.sbx_prob, rng, children[i], children[i + 1]);
      polynomial_mutation(children[i], bounds, cfg.mutation_eta, pm, rng);
      polynomial_mutation(children[i + 1], bounds, cfg.mutation_eta, pm, rng);
    }
    if (N % 2 != 0) {
      children[N - 1] = pop[perm[N - 1]];
      polynomial_mutation(children[N - 1], bounds, cfg.mutation_eta, pm, rng);
    }
    Mat CF = objectives(children);

    Mat rx = pop;
    rx.insert(rx.end(), children.begin(), children.end());
    Mat rf = F;
    rf.insert(rf.end(), CF.begin(), CF.end());
    const auto keep = environmental_selection(rf, N, reference_points, rng);
    Mat next_x, next_f;
    next_x.reserve(keep.size());
    next_f.reserve(keep.size());
    for (std::size_t i : keep) {
      next_x.push_back(std::move(rx[i]));
      next_f.push_back(std::move(rf[i]));
    }
    pop = std::move(next_x);
    F = std::move(next_f);
  }

  FrontEstimate out;
  std::set<Vec> seen;
  for (std::size_t i : pareto::weakly_nondominated_indices(F)) {
    if (seen.insert(pop[i]).second) {
      out.X.push_back(pop[i]);
      out.F.push_back(F[i]);
    }
  }
  return out;
}

MoeadResult run_moead(const MoeadSubproblems& subproblems, const Mat& init_pop,
                      const Bounds& bounds, const Mat& subproblem_positions,
                      const EAConfig& cfg) {
  const std::size_t N = subproblems.count;
  if (init_pop.size() != N || subproblem_positions.size() != N) {
    throw std::invalid_argument("run_moead: need one seed and one position per subproblem");
  }
  const std::size_t m = bounds.dim();
  const double pm = resolved_mutation_prob(cfg, m);
  const int T = std::min<int>(
      static_cast<int>(N),
      cfg.neighborhood > 0
          ? cfg.neighborhood
          : std::max<int>(2, static_cast<int>((N + 9) / 10)));
  Rng rng = make_rng(cfg.seed);

  // Neighborhoods: T nearest subproblem positions, self included.
  std::vector<std::vector<std::size_t>> neighbors(N);
  {
    std::vector<std::pair<double, std::size_t>> dist(N);
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        dist[j] = {squared_distance(subproblem_positions[i],
                                    subproblem_positions[j]),
                   j};
      }
      std::stable_sort(dist.begin(), dist.end(),
                       [](const auto& a, const auto& b) {
                         if (a.first != b.first) return a.first < b.first;
                         return a.second < b.second;
                       });
      neighbors[i].reserve(static_cast<std::size_t>(T));
      for (int t = 0; t < T; ++t) neighbors[i].push_back(dist[t].second);
    }
  }

  Mat incumbents = init_pop;
  Mat payloads = subproblems.prepare_batch(incumbents);
  Vec inc_value(N);
  for (std::size_t i = 0; i < N; ++i) {
    inc_value[i] = subproblems.value(i, payloads[i]);
  }
  MoeadResult best{incumbents, inc_value, payloads};

  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int gen = 0; gen < cfg.generations; ++gen) {
    // Phase 1 (serial): breed one child per subproblem from the incumbents as
    // of the generation start.
    Mat children(N);
    for (std::size_t i = 0; i < N; ++i) {
      const bool local = uni(rng) < cfg.neighbor_mating_prob;
      const std::size_t pool_size = local ? neighbors[i].size() : N;
      std::uniform_int_distribution<std::size_t> pick(0, pool_size - 1);
      std::size_t a = pick(rng);
      std::size_t b = pool_size > 1 ? pick(rng) : a;
      int guard = 0;
      while (b == a && pool_size > 1 && guard++ < 64) b = pick(rng);
      const std::size_t pa = local ? neighbors[i][a] : a;
      const std::size_t pb = local ? neighbors[i][b] : b;
      Vec c1, c2;
      sbx_crossover(incumbents[pa], incumbents[pb], bounds, cfg.sbx_eta,
                    cfg.sbx_prob, rng, c1, c2);
      polynomial_mutation(c1, bounds, cfg.mutation_eta, pm, rng);
      children[i] = std::move(c1);
    }
    // Phase 2 (parallel map): payload preparation.
    Mat child_payloads = subproblems.prepare_batch(children);
    // Phase 3 (serial): neighbor replacement, capped per child.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < N; ++i) {
      order = neighbors[i];
      std::shuffle(order.begin(), order.end(), rng);
      int replaced = 0;
      for (std::size_t j : order) {
        const double v = subproblems.value(j, child_payloads[i]);
        if (v > best.best_value[j]) {
          best.best_value[j] = v;
          best.best_x[j] = children[i];
          best.best_payload[j] = child_payloads[i];
        }
        if (replaced < cfg.replacement_cap && v > inc_value[j]) {
          incumbents[j] = children[i];
          payloads[j] = child_payloads[i];
          inc_value[j] = v;
          ++replaced;
        }
      }
    }
  }
  return best;
}

}  // namespace samo::ea
