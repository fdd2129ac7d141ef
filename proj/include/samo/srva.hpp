#pragma once

#include "samo/common.hpp"
#include "samo/rng.hpp"

namespace samo::srva {

struct ReferenceVectorSet {
  Mat vectors;               // unit L2 norm, nonnegative components
  std::vector<int> cluster;  // labels in [0, n_add)
  bool adaptive = true;
};

// Greedy max-min selection from the estimated front (weak PF included):
// each pick maximizes, over the remaining candidates, the minimum distance
// to the already selected set union the sample objectives. When candidates
// run out, the selection cycles through the picks made so far.
Mat select_reference_solutions(const Mat& front_norm, const Mat& samples_norm,
                               int n_ref);

// k-means (k-means++ seeding) on the members inside the normalized
// [0,1]^M hypercube; members outside (weak PF beyond the nadir) are assigned
// to the nearest resulting centroid. Every label in [0, n_add) ends up used
// whenever there are at least n_add points.
std::vector<int> cluster_reference_solutions(const Mat& selected, int n_add,
                                             Rng& rng);

// Normalized objective vectors to unit reference vectors; labels carry over.
// Near-zero vectors are replaced by the uniform direction with a warning.
ReferenceVectorSet to_unit_vectors(const Mat& selected,
                                   std::vector<int> cluster);

// Fixed two-layer SLD reference set for the baseline mode, unit-normalized,
// with cluster labels from the same k-means procedure on the simplex points.
ReferenceVectorSet sld_reference_set(int M, int H1, int H2, int n_add,
                                     Rng& rng);

}  // namespace samo::srva
