#pragma once

#include <cstdint>
#include <functional>

#include "samo/common.hpp"
#include "samo/parallel.hpp"
#include "samo/rng.hpp"

namespace samo::ea {

struct EAConfig {
  int population = 50;    // 0 lets NSGA-III derive it from the vector count
  int generations = 50;
  double sbx_eta = 15.0;
  double sbx_prob = 1.0;
  double mutation_eta = 20.0;
  double mutation_prob = -1.0;  // < 0 means 1/m
  // MOEA/D extras
  int neighborhood = 0;  // 0 means max(2, ceil(N/10))
  double neighbor_mating_prob = 0.9;
  int replacement_cap = 2;
  std::uint64_t seed = 0;
};

// Simulated binary crossover; children are clipped to the bounds.
void sbx_crossover(const Vec& p1, const Vec& p2, const Bounds& bounds,
                   double eta, double prob, Rng& rng, Vec& c1, Vec& c2);

void polynomial_mutation(Vec& x, const Bounds& bounds, double eta, double prob,
                         Rng& rng);

// Batch evaluators let callers decide how a generation's evaluations are
// dispatched; all engine randomness stays on the single serial stream.
using BatchScalarFn = std::function<Vec(const Mat&)>;
using BatchVectorFn = std::function<Mat(const Mat&)>;

BatchScalarFn batchify(std::function<double(const Vec&)> f, Exec exec);
BatchVectorFn batchify_vec(std::function<Vec(const Vec&)> f, Exec exec);

struct BestIndividual {
  Vec x;
  double value = 0.0;
};

// Generational GA, binary tournament, elitism 1, minimization. Returns the
// best-ever individual.
BestIndividual run_single_objective_ga(const BatchScalarFn& objective,
                                       const Bounds& bounds,
                                       const EAConfig& cfg);

struct FrontEstimate {
  Mat X;
  Mat F;
};

// NSGA-III with fixed reference points (simplex-lattice rows). Returns the
// weakly nondominated subset of the final population, duplicates removed.
FrontEstimate run_nsga3(const BatchVectorFn& objectives, const Bounds& bounds,
                        const Mat& reference_points, const EAConfig& cfg);

// Decomposition engine maximizing one scalar target per subproblem. The
// expensive per-point work goes through prepare_batch (parallelizable);
// value(i, payload) must be cheap and pure.
struct MoeadSubproblems {
  std::size_t count = 0;
  std::function<Mat(const Mat&)> prepare_batch;
  std::function<double(std::size_t, const Vec&)> value;
};

struct MoeadResult {
  Mat best_x;
  Vec best_value;
  Mat best_payload;
};

// Batch-synchronous generations: children are bred serially from the
// incumbents at the generation start, prepared as one batch, then applied to
// neighbor subproblems in index order with at most replacement_cap takeovers
// per child. subproblem_positions drives the neighborhood graph.
MoeadResult run_moead(const MoeadSubproblems& subproblems, const Mat& init_pop,
                      const Bounds& bounds, const Mat& subproblem_positions,
                      const EAConfig& cfg);

}  // namespace samo::ea
