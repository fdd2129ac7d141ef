#pragma once

#include "samo/common.hpp"
#include "samo/epbii.hpp"
#include "samo/rng.hpp"
#include "samo/srva.hpp"

namespace samo::selection {

struct CandidateTable {
  Mat x;                     // one candidate per reference vector
  Vec epbii;                 // its EPBII value
  Mat f_norm;                // estimated objectives, normalized
  std::vector<int> rank;     // Pareto rank over all candidates, 1-based
  std::vector<int> cluster;  // label from the reference-vector set
};

// Occupancy of each reference vector's territory, updated as picks land.
struct NicheState {
  std::vector<int> n_nds;
};

// Correction h: x^2 up to 1, then 2x - 1 (continuous at the junction).
double correction(double x);

// nc^i = sum_j n_nds^j / (h(d_ij / d_min) + 1)
double niche_count(std::size_t i, const NicheState& state,
                   const epbii::TerritoryContext& ctx);

// EPBII / (nc * rank), with the nc = 0 denominator clamped so
// unexplored-territory candidates rank first.
double fitness(double epbii_value, double nc, int rank);

// Territory occupancy of the current nondominated sample objectives.
NicheState init_niche_state(const Mat& nds_norm,
                            const srva::ReferenceVectorSet& refs,
                            double theta_ref);

// Cluster-by-cluster batch selection: pick the max-fitness candidate of each
// of the first n_add clusters in order, folding each pick's estimated
// objectives into the niche state before the next cluster. Picks matching an
// earlier pick or an existing design point exactly are jittered within
// bounds.
Mat select_additional(const CandidateTable& table, int n_add,
                      NicheState& state, const epbii::TerritoryContext& ctx,
                      const srva::ReferenceVectorSet& refs,
                      const Bounds& bounds, const Mat& existing_x, Rng& rng);

}  // namespace samo::selection
