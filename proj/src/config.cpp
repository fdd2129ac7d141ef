#include "samo/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace samo {

namespace {

using nlohmann::json;

Vec hv_reference_point(const std::string& problem, int M) {
  if (M != 3 && M != 6) return {};
  if (problem == "dtlz1") return Vec(M, M == 3 ? 150.0 : 50.0);
  if (problem == "dtlz2" || problem == "dtlz5") return Vec(M, 1.1);
  if (problem == "dtlz7") {
    Vec ref(M, 1.1);
    ref[M - 1] = M == 3 ? 6.1 : 12.1;
    return ref;
  }
  return {};
}

int igd_reference_count(const std::string& problem, int M) {
  if (M != 3 && M != 6) return 0;
  if (problem == "dtlz1" || problem == "dtlz2") return M == 3 ? 1326 : 8568;
  if (problem == "dtlz5") return M == 3 ? 2000 : 8000;
  if (problem == "dtlz7") return M == 3 ? 2401 : 7776;
  return 0;
}

template <typename T>
T field_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument("config field '" + key + "' has a bad type");
  }
}

}  // namespace

OptimizerConfig default_config(const ProblemSpec& problem, RefVectorMode mode) {
  OptimizerConfig cfg;
  cfg.ref_mode = mode;
  const int M = problem.num_objectives;
  if (M == 3) {
    cfg.n_ref = 91;
    cfg.nsga3_h1 = 30;
    cfg.nsga3_h2 = 0;
    cfg.sld_h1 = 12;
    cfg.sld_h2 = 0;
  } else if (M == 6) {
    cfg.n_ref = 112;
    cfg.nsga3_h1 = 6;
    cfg.nsga3_h2 = 5;
    cfg.sld_h1 = 3;
    cfg.sld_h2 = 3;
  }
  cfg.indicators.hv_ref = hv_reference_point(problem.name, M);
  cfg.indicators.igd_ref_count = igd_reference_count(problem.name, M);
  if (M > 4) cfg.indicators.hv_method = IndicatorConfig::HvMethod::MonteCarlo;
  return cfg;
}

namespace {

OptimizerConfig parse_optimizer(const json& j, const ProblemSpec& problem,
                                RefVectorMode mode) {
  OptimizerConfig cfg = default_config(problem, mode);
  cfg.n_init = field_or(j, "n_init", cfg.n_init);
  cfg.n_max = field_or(j, "n_max", cfg.n_max);
  cfg.n_add = field_or(j, "n_add", cfg.n_add);
  cfg.n_ref = field_or(j, "n_ref", cfg.n_ref);
  cfg.epsilon = field_or(j, "epsilon", cfg.epsilon);
  cfg.theta_pbi = field_or(j, "theta_pbi", cfg.theta_pbi);
  cfg.mc_count = field_or(j, "mc_count", cfg.mc_count);
  if (j.contains("nsga3")) {
    const json& n = j.at("nsga3");
    cfg.nsga3_generations = field_or(n, "generations", cfg.nsga3_generations);
    cfg.nsga3_h1 = field_or(n, "h1", cfg.nsga3_h1);
    cfg.nsga3_h2 = field_or(n, "h2", cfg.nsga3_h2);
  }
  if (j.contains("moead")) {
    const json& n = j.at("moead");
    cfg.moead_generations = field_or(n, "generations", cfg.moead_generations);
  }
  if (j.contains("sld")) {
    const json& n = j.at("sld");
    cfg.sld_h1 = field_or(n, "h1", cfg.sld_h1);
    cfg.sld_h2 = field_or(n, "h2", cfg.sld_h2);
  }
  if (j.contains("likelihood_ga")) {
    const json& n = j.at("likelihood_ga");
    cfg.likelihood_ga.population =
        field_or(n, "population", cfg.likelihood_ga.population);
    cfg.likelihood_ga.generations =
        field_or(n, "generations", cfg.likelihood_ga.generations);
    cfg.likelihood_ga.log10_theta_min =
        field_or(n, "log10_theta_min", cfg.likelihood_ga.log10_theta_min);
    cfg.likelihood_ga.log10_theta_max =
        field_or(n, "log10_theta_max", cfg.likelihood_ga.log10_theta_max);
  }
  if (j.contains("extreme_ga")) {
    const json& n = j.at("extreme_ga");
    cfg.extreme_ga.population =
        field_or(n, "population", cfg.extreme_ga.population);
    cfg.extreme_ga.generations =
        field_or(n, "generations", cfg.extreme_ga.generations);
  }
  if (j.contains("indicators")) {
    const json& n = j.at("indicators");
    if (n.contains("hv_ref")) {
      cfg.indicators.hv_ref = n.at("hv_ref").get<Vec>();
    }
    if (n.contains("hv_method")) {
      const std::string method = n.at("hv_method").get<std::string>();
      if (method == "auto") {
        cfg.indicators.hv_method = IndicatorConfig::HvMethod::Auto;
      } else if (method == "exact") {
        cfg.indicators.hv_method = IndicatorConfig::HvMethod::Exact;
      } else if (method == "monte-carlo") {
        cfg.indicators.hv_method = IndicatorConfig::HvMethod::MonteCarlo;
      } else {
        throw std::invalid_argument("indicators.hv_method must be one of "
                                    "auto/exact/monte-carlo");
      }
    }
    cfg.indicators.hv_mc_samples =
        field_or<long long>(n, "hv_mc_samples", cfg.indicators.hv_mc_samples);
    cfg.indicators.hv_mc_seed =
        field_or<std::uint64_t>(n, "hv_mc_seed", cfg.indicators.hv_mc_seed);
    if (n.contains("hv_mc_lower")) {
      cfg.indicators.hv_mc_lower = n.at("hv_mc_lower").get<Vec>();
    }
    cfg.indicators.igd_ref_count =
        field_or(n, "igd_ref_count", cfg.indicators.igd_ref_count);
    cfg.indicators.igd_ref_seed =
        field_or<std::uint64_t>(n, "igd_ref_seed", cfg.indicators.igd_ref_seed);
  }
  if (j.contains("debug")) {
    const json& n = j.at("debug");
    cfg.debug.dump_models = field_or(n, "dump_models", false);
    cfg.debug.dump_ref_vectors = field_or(n, "dump_ref_vectors", false);
    cfg.debug.dump_epbii = field_or(n, "dump_epbii", false);
  }
  return cfg;
}

}  // namespace

ExperimentPlan parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  if (field_or(root, "schema_version", 1) != 1) {
    throw std::invalid_argument("unsupported schema_version");
  }
  ExperimentPlan plan;
  plan.output_dir = field_or<std::string>(root, "output_dir", "samo-out");
  plan.workers = field_or(root, "workers", 1);
  if (plan.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (!root.contains("cases") || !root.at("cases").is_array() ||
      root.at("cases").empty()) {
    throw std::invalid_argument("config needs a non-empty 'cases' array");
  }
  std::set<std::string> names;
  for (const json& jc : root.at("cases")) {
    CaseSpec cs;
    const std::string problem = field_or<std::string>(jc, "problem", "");
    if (problem.empty()) {
      throw std::invalid_argument("case field 'problem' is required");
    }
    const int M = field_or(jc, "objectives", 0);
    if (M < 2) {
      throw std::invalid_argument("case field 'objectives' must be >= 2");
    }
    const int m = field_or(jc, "variables", 10);
    cs.problem = make_problem(problem, M, m);

    const std::string mode = field_or<std::string>(jc, "mode", "srva");
    RefVectorMode ref_mode;
    if (mode == "srva") {
      ref_mode = RefVectorMode::Adaptive;
    } else if (mode == "sld-baseline") {
      ref_mode = RefVectorMode::Sld;
    } else {
      throw std::invalid_argument(
          "case field 'mode' must be 'srva' or 'sld-baseline'");
    }

    if (!jc.contains("seeds") || !jc.at("seeds").is_array() ||
        jc.at("seeds").empty()) {
      throw std::invalid_argument("case field 'seeds' must be a non-empty "
                                  "array");
    }
    cs.seeds = jc.at("seeds").get<std::vector<std::uint64_t>>();
    std::set<std::uint64_t> unique_seeds(cs.seeds.begin(), cs.seeds.end());
    if (unique_seeds.size() != cs.seeds.size()) {
      throw std::invalid_argument("case field 'seeds' must be distinct");
    }

    cs.optimizer = parse_optimizer(jc.contains("optimizer") ? jc.at("optimizer")
                                                            : json::object(),
                                   cs.problem, ref_mode);
    cs.name = field_or<std::string>(
        jc, "name",
        problem + "_m" + std::to_string(M) + "_" + mode);
    if (!names.insert(cs.name).second) {
      throw std::invalid_argument("duplicate case name: " + cs.name);
    }
    validate_config(cs.optimizer, cs.problem);
    plan.cases.push_back(std::move(cs));
  }
  return plan;
}

}  // namespace samo
