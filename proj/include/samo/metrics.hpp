#pragma once

#include "samo/common.hpp"
#include "samo/parallel.hpp"
#include "samo/rng.hpp"

namespace samo::metrics {

// Exact hypervolume (minimization) by recursive sweep on the last objective:
// each slab between consecutive sorted values is weighted by the hypervolume
// of the prefix projection one dimension down. Points not strictly inside the
// reference box contribute nothing. Works for any M; intended for M <= 4.
double hypervolume_exact(const Mat& points, const Vec& ref);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Monte Carlo hypervolume over the box [lower, ref]; lower defaults to the
// componentwise minimum of the points. A fixed seed gives common random
// numbers across calls, which keeps archive hypervolume monotone as the
// archive grows.
McEstimate hypervolume_mc(const Mat& points, const Vec& ref,
                          long long samples, std::uint64_t seed,
                          const Vec* lower = nullptr,
                          Exec exec = Exec::Parallel);

// Dispatches on M: exact for M <= 4, Monte Carlo otherwise.
double hypervolume(const Mat& points, const Vec& ref, long long mc_samples,
                   std::uint64_t mc_seed, const Vec* mc_lower = nullptr,
                   Exec exec = Exec::Parallel);

// Mean over reference points z of min over points a of the clamped distance
// sqrt(sum_k max(a_k - z_k, 0)^2). Empty point set yields +inf.
double igd_plus(const Mat& points, const Mat& refs, Exec exec = Exec::Parallel);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  double min = 0.0;
  double max = 0.0;
};

Summary summarize(const Vec& values);

}  // namespace samo::metrics
