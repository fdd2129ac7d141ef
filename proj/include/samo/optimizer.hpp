#pragma once

#include <cstdint>
#include <string>

#include "samo/common.hpp"
#include "samo/ea.hpp"
#include "samo/epbii.hpp"
#include "samo/kriging.hpp"
#include "samo/pareto.hpp"
#include "samo/problems.hpp"
#include "samo/srva.hpp"

namespace samo {

struct DebugFlags {
  bool dump_models = false;       // per-objective surrogate diagnostics
  bool dump_ref_vectors = false;  // per-iteration reference-vector CSV
  bool dump_epbii = false;        // per-vector g_ref / occupancy / EPBII CSV
};

struct IndicatorConfig {
  Vec hv_ref;
  enum class HvMethod { Auto, Exact, MonteCarlo };
  HvMethod hv_method = HvMethod::Auto;
  long long hv_mc_samples = 1000000;
  std::uint64_t hv_mc_seed = 10007;
  Vec hv_mc_lower;  // empty means the origin
  int igd_ref_count = 0;
  std::uint64_t igd_ref_seed = 42;
};

enum class RefVectorMode { Adaptive, Sld };

struct OptimizerConfig {
  int n_init = 30;
  int n_max = 300;
  int n_add = 10;
  int n_ref = 0;
  RefVectorMode ref_mode = RefVectorMode::Adaptive;
  int sld_h1 = 0, sld_h2 = 0;      // baseline reference-vector factors
  int nsga3_generations = 200;
  int nsga3_h1 = 0, nsga3_h2 = 0;  // fixed-vector factors for front estimation
  int moead_generations = 50;
  kriging::GaConfig likelihood_ga;
  ea::EAConfig extreme_ga{50, 100};
  double epsilon = 0.01;
  double theta_pbi = 1.0;
  int mc_count = 100;
  std::uint64_t seed = 0;
  IndicatorConfig indicators;
  DebugFlags debug;
  std::string dump_dir = ".";
  Exec exec = Exec::Parallel;
};

// Throws std::invalid_argument describing the first violated constraint
// (n_add vs n_ref, the 5x fixed-vector rule, budget arithmetic); warns to
// stderr when n_init < m + 2.
void validate_config(const OptimizerConfig& cfg, const ProblemSpec& problem);

struct EstimatedFront {
  Mat X;         // design points of the surrogate nondominated pool
  Mat F;         // surrogate objectives, weak PF included
  Mat filtered;  // eps-dominance survivors feeding nadir/utopia
  pareto::NadirUtopia nu;
};

struct KrigingDiag {
  Vec theta;
  double mu_hat = 0.0;
  double sigma2_hat = 0.0;
  double nugget = 0.0;
  bool constant = false;
};

struct IterationRecord {
  int iteration = 0;
  int n = 0;
  double hv = 0.0;
  double igd_plus = 0.0;
  double wall_seconds = 0.0;
  std::string ref_source;  // "adaptive" or "sld"; empty on the init row
  Mat nds_x, nds_f;        // nondominated archive snapshot
  Vec nadir, utopia;       // normalization bounds used this iteration
  std::vector<KrigingDiag> models;
};

struct RunRecord {
  std::string problem;
  int num_objectives = 0;
  int num_variables = 0;
  std::string mode;  // "srva" or "sld-baseline"
  std::uint64_t seed = 0;
  std::vector<IterationRecord> iterations;
  double total_wall_seconds = 0.0;

  const IterationRecord& final_iteration() const { return iterations.back(); }
};

// Surrogate Pareto-front pool: NSGA-III on the model means with fixed SLD
// vectors, merged with one extreme-solution GA per objective, reduced to the
// weakly nondominated set; the eps-dominance survivors define nadir/utopia.
EstimatedFront estimate_front(const std::vector<kriging::Model>& models,
                              const Bounds& bounds, const OptimizerConfig& cfg,
                              const Vec& fallback_range, int iteration);

// Full optimization run. igd_reference may be empty, in which case the IGD+
// column is NaN. The record is bitwise-reproducible for a given config and
// seed apart from the wall-clock fields.
RunRecord run(const ProblemSpec& problem, const OptimizerConfig& cfg,
              const Mat& igd_reference);

}  // namespace samo
