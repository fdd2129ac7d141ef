#pragma once

#include <iosfwd>
#include <string>

#include "samo/config.hpp"

namespace samo {

// Loads the cached Pareto-front reference cloud for (problem, count, seed),
// generating and persisting it when missing. Files live under cache_dir as
// pf_<problem>_m<M>_n<count>_s<seed>.csv.
Mat load_or_create_pf_cache(const ProblemSpec& problem, int count,
                            std::uint64_t seed, const std::string& cache_dir);

// Executes every (case, seed) run on a worker pool, persisting one record
// per run plus per-case summary and convergence CSVs. Returns nonzero when
// any run failed; completed outputs are kept.
int run_plan(const ExperimentPlan& plan, std::ostream& log);

// Prints per-case summaries found under output_dir and, where a problem was
// run in both reference-vector modes, the adaptive-minus-baseline deltas.
int report(const std::string& output_dir, std::ostream& out);

}  // namespace samo
