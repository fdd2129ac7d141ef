#pragma once

#include <cstdint>

#include "samo/common.hpp"
#include "samo/ea.hpp"
#include "samo/kriging.hpp"
#include "samo/pareto.hpp"
#include "samo/parallel.hpp"
#include "samo/srva.hpp"

namespace samo::epbii {

struct PbiValue {
  double g = 0.0;   // d1 + theta_pbi * d2
  double d1 = 0.0;  // |f . lambda| for unit lambda
  double d2 = 0.0;  // distance from the ray
};

PbiValue pbi(const Vec& f_norm, const Vec& lambda, double theta_pbi);

// T = d1 - theta_ref * d2; nonnegative inside the territory.
double territory(const Vec& f_norm, const Vec& lambda, double theta_ref);

struct TerritoryContext {
  double theta_ref = 0.0;
  double d_min = 0.0;
  Mat d_ij;  // pairwise distances of vectors projected onto the sum-1 plane
  Vec g_ref;
  std::vector<std::vector<std::size_t>> territory_members;
};

// theta_ref = sqrt(2) / d_min where d_min is the mean nearest-neighbor
// distance of the projected reference vectors. Duplicated projections are
// excluded from the mean with a warning; an all-duplicate set falls back to
// a narrow territory.
TerritoryContext compute_theta_ref(const srva::ReferenceVectorSet& refs);

// Reference PBI per vector: minimum PBI over the in-territory samples; an
// empty territory falls back to the global minimum over all samples.
void compute_reference_pbi(const Mat& samples_norm,
                           const srva::ReferenceVectorSet& refs,
                           double theta_pbi, TerritoryContext& ctx);

struct McSampleBlock {
  Mat z;  // count x M standard normal draws, fixed for one MBO iteration
};

McSampleBlock make_mc_block(int count, int M, std::uint64_t seed);

// payload layout: [normalized means (M), normalized stddevs (M)]
Vec prediction_payload(const Vec& x, const std::vector<kriging::Model>& models,
                       const pareto::NadirUtopia& nu);
Mat payload_batch(const Mat& X, const std::vector<kriging::Model>& models,
                  const pareto::NadirUtopia& nu, Exec exec);

// Monte Carlo EPBII from a prepared payload: the PBII average over the draw
// block when the mean prediction sits inside the territory, the (negative)
// territory value otherwise.
double epbii_from_payload(const Vec& payload, const Vec& lambda, double g_ref,
                          double theta_pbi, double theta_ref,
                          const McSampleBlock& mc);

double epbii_value(const Vec& x, const Vec& lambda, double g_ref,
                   const std::vector<kriging::Model>& models,
                   const pareto::NadirUtopia& nu, double theta_pbi,
                   const TerritoryContext& ctx, const McSampleBlock& mc);

struct Candidates {
  Mat x;        // one candidate per reference vector
  Vec value;    // its EPBII
  Mat payload;  // normalized means and stddevs at the candidate
};

struct MaximizeConfig {
  ea::EAConfig moead;
  double theta_pbi = 1.0;
  int mc_count = 100;
  std::uint64_t mc_seed = 0;
  Exec exec = Exec::Parallel;
};

// Freezes theta_ref, the reference PBI and the draw block, seeds each
// subproblem with the estimated-front point nearest its reference vector,
// then runs MOEA/D over all subproblems at once. front_x/front_f hold the
// surrogate nondominated pool (weak PF included).
Candidates maximize_epbii(const srva::ReferenceVectorSet& refs,
                          const TerritoryContext& ctx,
                          const std::vector<kriging::Model>& models,
                          const pareto::NadirUtopia& nu, const Mat& front_x,
                          const Mat& front_f, const Bounds& bounds,
                          const MaximizeConfig& cfg);

}  // namespace samo::epbii
