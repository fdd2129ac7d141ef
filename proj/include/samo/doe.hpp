#pragma once

#include "samo/common.hpp"
#include "samo/rng.hpp"

namespace samo {

// Latin hypercube design in the unit hypercube: per column, the n values
// occupy n distinct strata [i/n, (i+1)/n) in independently permuted order,
// with a uniform offset inside each stratum.
Mat latin_hypercube(int n, int m, Rng& rng);

// Affine map from [0,1)^m rows to the given bounds.
Mat scale_to_bounds(const Mat& unit_points, const Bounds& bounds);

}  // namespace samo
