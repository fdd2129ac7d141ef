#include "samo/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>

#include "samo/doe.hpp"
#include "samo/metrics.hpp"
#include "samo/selection.hpp"

namespace samo {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Vec objective_column(const Mat& F, std::size_t k) {
  Vec col(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) col[i] = F[i][k];
  return col;
}

double archive_hypervolume(const Mat& nds_f, const IndicatorConfig& ind,
                           Exec exec) {
  const std::size_t M = ind.hv_ref.size();
  const bool exact =
      ind.hv_method == IndicatorConfig::HvMethod::Exact ||
      (ind.hv_method == IndicatorConfig::HvMethod::Auto && M <= 4);
  if (exact) return metrics::hypervolume_exact(nds_f, ind.hv_ref);
  Vec lower = ind.hv_mc_lower.empty() ? Vec(M, 0.0) : ind.hv_mc_lower;
  return metrics::hypervolume_mc(nds_f, ind.hv_ref, ind.hv_mc_samples,
                                 ind.hv_mc_seed, &lower, exec)
      .value;
}

void dump_reference_vectors(const std::string& dir, int iteration,
                            const srva::ReferenceVectorSet& refs) {
  char name[64];
  std::snprintf(name, sizeof(name), "refvectors_iter%03d.csv", iteration);
  std::ofstream out(std::filesystem::path(dir) / name);
  for (std::size_t i = 0; i < refs.vectors.size(); ++i) {
    for (double v : refs.vectors[i]) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << buf << ',';
    }
    out << refs.cluster[i] << '\n';
  }
}

void dump_epbii_diag(const std::string& dir, int iteration,
                     const epbii::TerritoryContext& ctx, const Vec& best) {
  char name[64];
  std::snprintf(name, sizeof(name), "epbii_iter%03d.csv", iteration);
  std::ofstream out(std::filesystem::path(dir) / name);
  out << "vector,g_ref,territory_occupancy,best_epbii\n";
  for (std::size_t i = 0; i < ctx.g_ref.size(); ++i) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%zu,%.17g", i, ctx.g_ref[i],
                  ctx.territory_members[i].size(), best[i]);
    out << buf << '\n';
  }
}

}  // namespace

void validate_config(const OptimizerConfig& cfg, const ProblemSpec& problem) {
  if (cfg.n_init < 2) throw std::invalid_argument("n_init must be >= 2");
  if (cfg.n_max < cfg.n_init) {
    throw std::invalid_argument("n_max must be >= n_init");
  }
  if (cfg.n_add < 1) throw std::invalid_argument("n_add must be >= 1");
  if (cfg.n_ref < cfg.n_add) {
    throw std::invalid_argument("n_ref must be >= n_add");
  }
  if (cfg.nsga3_h1 < 1) {
    throw std::invalid_argument("nsga3_h1 must be >= 1");
  }
  const std::size_t fixed =
      pareto::two_layer_sld(problem.num_objectives, cfg.nsga3_h1, cfg.nsga3_h2)
          .size();
  if (fixed < static_cast<std::size_t>(5 * cfg.n_ref)) {
    throw std::invalid_argument(
        "NSGA-III fixed reference vectors (" + std::to_string(fixed) +
        ") must number at least five times the adaptive reference vectors (" +
        std::to_string(cfg.n_ref) + ")");
  }
  if (cfg.ref_mode == RefVectorMode::Sld && cfg.sld_h1 < 1) {
    throw std::invalid_argument("sld baseline mode needs sld_h1 >= 1");
  }
  if (static_cast<int>(cfg.indicators.hv_ref.size()) !=
      problem.num_objectives) {
    throw std::invalid_argument("hypervolume reference point must have one "
                                "component per objective");
  }
  if (cfg.n_init < problem.num_variables + 2) {
    std::cerr << "[samo] warning: n_init below m + 2; surrogate fits may be "
                 "poor\n";
  }
}

EstimatedFront estimate_front(const std::vector<kriging::Model>& models,
                              const Bounds& bounds, const OptimizerConfig& cfg,
                              const Vec& fallback_range, int iteration) {
  const std::size_t M = models.size();
  const Mat fixed_refs =
      pareto::two_layer_sld(static_cast<int>(M), cfg.nsga3_h1, cfg.nsga3_h2);

  const ea::BatchVectorFn surrogate_means = [&](const Mat& X) {
    Mat out(X.size(), Vec(M));
    Vec col;
    for (std::size_t k = 0; k < M; ++k) {
      kriging::predict_mean_batch(models[k], X, col, cfg.exec);
      for (std::size_t i = 0; i < X.size(); ++i) out[i][k] = col[i];
    }
    return out;
  };

  ea::EAConfig ncfg;
  ncfg.population = 0;  // derived from the fixed-vector count
  ncfg.generations = cfg.nsga3_generations;
  ncfg.sbx_eta = 15.0;
  ncfg.sbx_prob = 1.0;
  ncfg.mutation_eta = 20.0;
  ncfg.seed = derive_seed(cfg.seed, Stream::Nsga3,
                          static_cast<std::uint64_t>(iteration));
  ea::FrontEstimate fe = run_nsga3(surrogate_means, bounds, fixed_refs, ncfg);

  // Merge one extreme solution per objective into the pool.
  for (std::size_t k = 0; k < M; ++k) {
    const ea::BatchScalarFn single = [&](const Mat& X) {
      Vec out;
      kriging::predict_mean_batch(models[k], X, out, cfg.exec);
      return out;
    };
    ea::EAConfig ecfg = cfg.extreme_ga;
    ecfg.seed = derive_seed(cfg.seed, Stream::ExtremeGa,
                            static_cast<std::uint64_t>(iteration), k);
    const ea::BestIndividual extreme =
        ea::run_single_objective_ga(single, bounds, ecfg);
    Vec f(M);
    for (std::size_t kk = 0; kk < M; ++kk) {
      f[kk] = models[kk].predict_mean(extreme.x);
    }
    fe.X.push_back(extreme.x);
    fe.F.push_back(std::move(f));
  }

  EstimatedFront front;
  std::set<Vec> seen;
  for (std::size_t i : pareto::weakly_nondominated_indices(fe.F)) {
    if (seen.insert(fe.X[i]).second) {
      front.X.push_back(fe.X[i]);
      front.F.push_back(fe.F[i]);
    }
  }
  front.filtered = pareto::epsilon_dominance_filter(front.F, cfg.epsilon);
  front.nu =
      pareto::estimate_nadir_utopia(front.filtered, cfg.epsilon, fallback_range);
  return front;
}

RunRecord run(const ProblemSpec& problem, const OptimizerConfig& cfg,
              const Mat& igd_reference) {
  validate_config(cfg, problem);
  const auto t_total = std::chrono::steady_clock::now();
  const Bounds& bounds = problem.bounds;
  const int M = problem.num_objectives;
  const int m = problem.num_variables;

  RunRecord record;
  record.problem = problem.name;
  record.num_objectives = M;
  record.num_variables = m;
  record.mode = cfg.ref_mode == RefVectorMode::Adaptive ? "srva" : "sld-baseline";
  record.seed = cfg.seed;

  Mat X, F;
  const auto evaluate_and_archive = [&](const Mat& picks) {
    for (const Vec& x : picks) {
      Vec f = evaluate(problem, x);
      for (double v : f) {
        if (!std::isfinite(v)) {
          throw std::runtime_error("objective evaluation returned a "
                                   "non-finite value");
        }
      }
      X.push_back(x);
      F.push_back(std::move(f));
    }
  };

  const auto record_iteration = [&](int iteration, double wall,
                                    const std::string& source,
                                    std::vector<KrigingDiag> diags,
                                    const pareto::NadirUtopia* nu = nullptr) {
    IterationRecord row;
    row.iteration = iteration;
    row.n = static_cast<int>(X.size());
    if (nu != nullptr) {
      row.nadir = nu->nadir;
      row.utopia = nu->utopia;
    }
    const auto nds = pareto::nondominated_indices(F);
    for (std::size_t i : nds) {
      row.nds_x.push_back(X[i]);
      row.nds_f.push_back(F[i]);
    }
    row.hv = archive_hypervolume(row.nds_f, cfg.indicators, cfg.exec);
    row.igd_plus = igd_reference.empty()
                       ? std::numeric_limits<double>::quiet_NaN()
                       : metrics::igd_plus(row.nds_f, igd_reference, cfg.exec);
    row.wall_seconds = wall;
    row.ref_source = source;
    row.models = std::move(diags);
    record.iterations.push_back(std::move(row));
  };

  // initial design
  {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng = make_rng(derive_seed(cfg.seed, Stream::Lhs));
    evaluate_and_archive(
        scale_to_bounds(latin_hypercube(cfg.n_init, m, rng), bounds));
    record_iteration(0, seconds_since(t0), "", {});
  }

  std::optional<srva::ReferenceVectorSet> sld_refs;
  if (cfg.ref_mode == RefVectorMode::Sld) {
    Rng rng = make_rng(derive_seed(cfg.seed, Stream::Kmeans, 0));
    sld_refs =
        srva::sld_reference_set(M, cfg.sld_h1, cfg.sld_h2, cfg.n_add, rng);
  }

  int iteration = 1;
  while (static_cast<int>(X.size()) < cfg.n_max) {
    const auto t0 = std::chrono::steady_clock::now();

    // fit one surrogate per objective
    std::vector<kriging::Model> models;
    models.reserve(M);
    std::vector<KrigingDiag> diags;
    for (int k = 0; k < M; ++k) {
      kriging::GaConfig ga = cfg.likelihood_ga;
      ga.seed = derive_seed(cfg.seed, Stream::LikelihoodGa,
                            static_cast<std::uint64_t>(iteration),
                            static_cast<std::uint64_t>(k));
      models.push_back(kriging::fit(X, objective_column(F, k), bounds, ga,
                                    cfg.exec));
      if (cfg.debug.dump_models) {
        const auto& mdl = models.back();
        diags.push_back({mdl.theta(), mdl.mu_hat(), mdl.sigma2_hat(),
                         mdl.nugget(), mdl.constant()});
      }
    }

    Vec fallback_range(M);
    for (int k = 0; k < M; ++k) {
      double lo = F[0][k], hi = F[0][k];
      for (const Vec& f : F) {
        lo = std::min(lo, f[k]);
        hi = std::max(hi, f[k]);
      }
      fallback_range[k] = hi - lo;
    }

    const EstimatedFront front =
        estimate_front(models, bounds, cfg, fallback_range, iteration);

    // reference vectors: the adaptive step is the only mode difference
    srva::ReferenceVectorSet refs;
    if (cfg.ref_mode == RefVectorMode::Adaptive && !front.F.empty()) {
      const Mat front_norm = pareto::normalize(front.F, front.nu);
      const Mat samples_norm = pareto::normalize(F, front.nu);
      const Mat selected =
          srva::select_reference_solutions(front_norm, samples_norm, cfg.n_ref);
      Rng rng = make_rng(derive_seed(cfg.seed, Stream::Kmeans,
                                     static_cast<std::uint64_t>(iteration)));
      std::vector<int> labels =
          srva::cluster_reference_solutions(selected, cfg.n_add, rng);
      refs = srva::to_unit_vectors(selected, std::move(labels));
    } else {
      if (cfg.ref_mode == RefVectorMode::Adaptive) {
        std::cerr << "[samo] empty estimated front; falling back to the SLD "
                     "reference set for this iteration\n";
      }
      if (!sld_refs) {
        Rng rng = make_rng(derive_seed(cfg.seed, Stream::Kmeans, 0));
        const int h1 = cfg.sld_h1 > 0 ? cfg.sld_h1 : cfg.nsga3_h1;
        sld_refs = srva::sld_reference_set(M, h1, cfg.sld_h2, cfg.n_add, rng);
      }
      refs = *sld_refs;
    }

    // EPBII maximization
    epbii::TerritoryContext ctx = epbii::compute_theta_ref(refs);
    const Mat samples_norm = pareto::normalize(F, front.nu);
    epbii::compute_reference_pbi(samples_norm, refs, cfg.theta_pbi, ctx);

    epbii::MaximizeConfig mcfg;
    mcfg.moead.generations = cfg.moead_generations;
    mcfg.moead.seed = derive_seed(cfg.seed, Stream::Moead,
                                  static_cast<std::uint64_t>(iteration));
    mcfg.theta_pbi = cfg.theta_pbi;
    mcfg.mc_count = cfg.mc_count;
    mcfg.mc_seed = derive_seed(cfg.seed, Stream::McBlock,
                               static_cast<std::uint64_t>(iteration));
    mcfg.exec = cfg.exec;
    const epbii::Candidates cands =
        epbii::maximize_epbii(refs, ctx, models, front.nu, front.X, front.F, bounds,
                             mcfg);

    if (cfg.debug.dump_ref_vectors) {
      dump_reference_vectors(cfg.dump_dir, iteration, refs);
    }
    if (cfg.debug.dump_epbii) {
      dump_epbii_diag(cfg.dump_dir, iteration, ctx, cands.value);
    }

    // cluster-wise batch selection of the additional sample points
    selection::CandidateTable table;
    table.x = cands.x;
    table.epbii = cands.value;
    table.f_norm.reserve(cands.payload.size());
    for (const Vec& payload : cands.payload) {
      table.f_norm.emplace_back(payload.begin(), payload.begin() + M);
    }
    table.rank = pareto::nondominated_sort(table.f_norm);
    table.cluster = refs.cluster;

    Mat nds_norm;
    for (std::size_t i : pareto::nondominated_indices(F)) {
      nds_norm.push_back(pareto::normalize(F[i], front.nu));
    }
    selection::NicheState state =
        selection::init_niche_state(nds_norm, refs, ctx.theta_ref);

    const int n_add_eff =
        std::min(cfg.n_add, cfg.n_max - static_cast<int>(X.size()));
    Rng jitter_rng = make_rng(derive_seed(cfg.seed, Stream::Jitter,
                                          static_cast<std::uint64_t>(iteration)));
    const Mat picks = selection::select_additional(
        table, n_add_eff, state, ctx, refs, bounds, X, jitter_rng);

    evaluate_and_archive(picks);
    record_iteration(iteration, seconds_since(t0),
                     refs.adaptive ? "adaptive" : "sld", std::move(diags),
                     &front.nu);
    ++iteration;
  }

  record.total_wall_seconds = seconds_since(t_total);
  return record;
}

}  // namespace samo
