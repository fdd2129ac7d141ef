#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "samo/optimizer.hpp"
#include "samo/problems.hpp"

namespace samo {

struct CaseSpec {
  std::string name;
  ProblemSpec problem;
  OptimizerConfig optimizer;
  std::vector<std::uint64_t> seeds;
};

struct ExperimentPlan {
  std::string output_dir;
  int workers = 1;
  std::vector<CaseSpec> cases;
};

// Experiment-protocol defaults keyed on (problem, M): budgets, reference
// vector counts and SLD factors, hypervolume reference points and IGD+
// reference-set sizes. Unknown combinations leave the corresponding fields
// unset, to be supplied in the config file.
OptimizerConfig default_config(const ProblemSpec& problem, RefVectorMode mode);

// Parses and fully validates a JSON experiment plan; every omitted optimizer
// field is filled from default_config. Schema or invariant violations throw
// std::invalid_argument naming the offending field.
ExperimentPlan parse_config(const std::string& path);

}  // namespace samo
