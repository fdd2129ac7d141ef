#include <CLI11.hpp>
#include <iostream>

#include "samo/config.hpp"
#include "samo/plan.hpp"
#include "samo/problems.hpp"

int main(int argc, char** argv) {
  CLI::App app{"samo: many-objective Bayesian optimization experiments"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run_cmd =
      app.add_subcommand("run", "execute an experiment plan from a JSON file");
  run_cmd->add_option("config", config_path, "plan file")->required();

  std::string report_dir;
  CLI::App* report_cmd =
      app.add_subcommand("report", "summarize completed runs");
  report_cmd->add_option("dir", report_dir, "plan output directory")
      ->required();

  std::string pf_problem;
  int pf_objectives = 3;
  int pf_count = 0;
  std::uint64_t pf_seed = 42;
  std::string pf_dir = "pf_cache";
  CLI::App* pf_cmd = app.add_subcommand(
      "pf-cache", "generate and cache a Pareto-front reference set");
  pf_cmd->add_option("problem", pf_problem, "problem name, e.g. dtlz2")
      ->required();
  pf_cmd->add_option("objectives", pf_objectives, "objective count")
      ->required();
  pf_cmd->add_option("count", pf_count, "number of reference points")
      ->required();
  pf_cmd->add_option("seed", pf_seed, "sampler seed")->required();
  pf_cmd->add_option("--out", pf_dir, "cache directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const samo::ExperimentPlan plan = samo::parse_config(config_path);
      return samo::run_plan(plan, std::cout);
    }
    if (*report_cmd) {
      return samo::report(report_dir, std::cout);
    }
    if (*pf_cmd) {
      const samo::ProblemSpec problem =
          samo::make_problem(pf_problem, pf_objectives, pf_objectives);
      const samo::Mat refs =
          samo::load_or_create_pf_cache(problem, pf_count, pf_seed, pf_dir);
      std::cout << "cached " << refs.size() << " reference points under "
                << pf_dir << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
