#pragma once

#include <utility>

#include "samo/common.hpp"
#include "samo/rng.hpp"

namespace samo {

struct ProblemSpec {
  std::string name;        // "dtlz1" .. "dtlz7"
  int num_objectives = 0;  // M >= 2
  int num_variables = 0;   // m >= M (DTLZ needs k = m - M + 1 >= 1)
  Bounds bounds;
};

// One evaluated design point.
struct Sample {
  Vec x;
  Vec f;
};

// Validates M/m and sets [0,1]^m bounds. Throws std::invalid_argument on a
// bad name or dimension combination.
ProblemSpec make_problem(const std::string& name, int num_objectives,
                         int num_variables);

// Exact objective vector; deterministic. Throws std::invalid_argument when x
// is outside the problem bounds.
Vec evaluate(const ProblemSpec& problem, const Vec& x);

// `count` points on the analytic Pareto front, used as IGD+ reference sets.
// Supported for DTLZ1/2/5/7; other problems throw std::runtime_error.
Mat sample_true_pf(const ProblemSpec& problem, int count, Rng& rng);

// Disconnected intervals of y in [0,1] where the DTLZ7 per-coordinate
// trade-off y*(1+sin(3*pi*y)) attains a strict running maximum. The Pareto
// front restricts every position variable to this set.
const std::vector<std::pair<double, double>>& dtlz7_optimal_intervals();

}  // namespace samo
