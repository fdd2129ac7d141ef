#pragma once

#include "samo/common.hpp"

namespace samo::pareto {

// Minimization convention throughout: a dominates b when a <= b componentwise
// with at least one strict improvement.
bool dominates(const Vec& a, const Vec& b);

// a < b in every component. Points that survive this filter form the weakly
// nondominated set (the weak Pareto front stays in).
bool strictly_dominates(const Vec& a, const Vec& b);

// Pareto rank per point, 1 = nondominated.
std::vector<int> nondominated_sort(const Mat& F);

// Fronts as index lists, front 0 = rank 1 (Deb's fast nondominated sort).
std::vector<std::vector<std::size_t>> nondominated_fronts(const Mat& F);

// Indices of rank-1 points.
std::vector<std::size_t> nondominated_indices(const Mat& F);

// Indices of points not strictly dominated by any other.
std::vector<std::size_t> weakly_nondominated_indices(const Mat& F);

// One sweep in insertion order over the set, tentatively normalized by its
// own per-objective min/max: a member is dropped when some other current
// member, shifted down by eps in every objective, dominates it. Survivors are
// returned in original units and order; never empty.
Mat epsilon_dominance_filter(const Mat& F, double eps);

struct NadirUtopia {
  Vec nadir;
  Vec utopia;
};

// Per-objective max + eps / min - eps in the set's own normalized space,
// mapped back to original units. Objectives with max == min fall back to the
// given range proxy (the sample archive's observed range, or 1.0).
NadirUtopia estimate_nadir_utopia(const Mat& filtered, double eps,
                                  const Vec& fallback_range);

Vec normalize(const Vec& f, const NadirUtopia& nu);
Mat normalize(const Mat& F, const NadirUtopia& nu);
Vec denormalize(const Vec& fn, const NadirUtopia& nu);

// Simplex-lattice design: all vectors with components in {0, 1/H, ..., 1}
// summing to 1. Count is C(H+M-1, M-1).
Mat sld_vectors(int M, int H);

// Outer layer H1 plus, when H2 > 0, an inner layer shrunk toward the
// centroid via w <- (w + 1/M) / 2.
Mat two_layer_sld(int M, int H1, int H2);

}  // namespace samo::pareto
