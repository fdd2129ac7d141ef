#include "samo/plan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "samo/metrics.hpp"
#include "samo/runio.hpp"

namespace samo {

namespace fs = std::filesystem;

Mat load_or_create_pf_cache(const ProblemSpec& problem, int count,
                            std::uint64_t seed, const std::string& cache_dir) {
  fs::create_directories(cache_dir);
  const std::string name = "pf_" + problem.name + "_m" +
                           std::to_string(problem.num_objectives) + "_n" +
                           std::to_string(count) + "_s" + std::to_string(seed) +
                           ".csv";
  const fs::path path = fs::path(cache_dir) / name;
  if (fs::exists(path)) {
    return runio::read_matrix_csv(path.string());
  }
  Rng rng = make_rng(derive_seed(seed, Stream::PfSample));
  const Mat refs = sample_true_pf(problem, count, rng);
  runio::write_matrix_csv(path.string(), refs);
  return refs;
}

namespace {

struct RunTask {
  std::size_t case_index = 0;
  std::size_t seed_index = 0;
};

double percentile(Vec sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

void write_case_meta(const fs::path& dir, const CaseSpec& cs) {
  nlohmann::json j;
  j["name"] = cs.name;
  j["problem"] = cs.problem.name;
  j["objectives"] = cs.problem.num_objectives;
  j["variables"] = cs.problem.num_variables;
  j["mode"] =
      cs.optimizer.ref_mode == RefVectorMode::Adaptive ? "srva" : "sld-baseline";
  j["seeds"] = cs.seeds;
  std::ofstream out(dir / "case.json");
  out << j.dump(1) << '\n';
}

void write_summary_csv(const fs::path& dir, const CaseSpec& cs,
                       const std::vector<RunRecord>& records) {
  Vec hv, igd;
  for (const RunRecord& r : records) {
    hv.push_back(r.final_iteration().hv);
    if (!std::isnan(r.final_iteration().igd_plus)) {
      igd.push_back(r.final_iteration().igd_plus);
    }
  }
  const metrics::Summary shv = metrics::summarize(hv);
  std::ofstream out(dir / "summary.csv");
  out << "case,problem,objectives,mode,runs,"
         "hv_mean,hv_std,hv_min,hv_max,"
         "igdp_mean,igdp_std,igdp_min,igdp_max\n";
  out << cs.name << ',' << cs.problem.name << ','
      << cs.problem.num_objectives << ','
      << (cs.optimizer.ref_mode == RefVectorMode::Adaptive ? "srva"
                                                           : "sld-baseline")
      << ',' << records.size() << ',' << runio::format_double(shv.mean) << ','
      << runio::format_double(shv.stddev) << ','
      << runio::format_double(shv.min) << ',' << runio::format_double(shv.max);
  if (!igd.empty()) {
    const metrics::Summary sig = metrics::summarize(igd);
    out << ',' << runio::format_double(sig.mean) << ','
        << runio::format_double(sig.stddev) << ','
        << runio::format_double(sig.min) << ','
        << runio::format_double(sig.max) << '\n';
  } else {
    out << ",nan,nan,nan,nan\n";
  }
}

void write_convergence_csv(const fs::path& dir,
                           const std::vector<RunRecord>& records) {
  std::size_t iters = 0;
  for (const RunRecord& r : records) {
    iters = std::max(iters, r.iterations.size());
  }
  std::ofstream out(dir / "convergence.csv");
  out << "iteration,n,hv_mean,hv_p25,hv_p75\n";
  for (std::size_t i = 0; i < iters; ++i) {
    Vec hv;
    int n = 0;
    for (const RunRecord& r : records) {
      if (i < r.iterations.size()) {
        hv.push_back(r.iterations[i].hv);
        n = r.iterations[i].n;
      }
    }
    std::sort(hv.begin(), hv.end());
    double mean = 0.0;
    for (double v : hv) mean += v;
    mean /= static_cast<double>(hv.size());
    out << i << ',' << n << ',' << runio::format_double(mean) << ','
        << runio::format_double(percentile(hv, 0.25)) << ','
        << runio::format_double(percentile(hv, 0.75)) << '\n';
  }
}

}  // namespace

int run_plan(const ExperimentPlan& plan, std::ostream& log) {
  fs::create_directories(plan.output_dir);

  int workers = plan.workers;
  if (const char* env = std::getenv("SAMO_WORKERS")) {
    workers = std::max(1, std::atoi(env));
  }

  // IGD+ reference clouds, cached per (problem, M, count, seed).
  std::vector<Mat> igd_refs(plan.cases.size());
  for (std::size_t c = 0; c < plan.cases.size(); ++c) {
    const CaseSpec& cs = plan.cases[c];
    if (cs.optimizer.indicators.igd_ref_count > 0) {
      igd_refs[c] = load_or_create_pf_cache(
          cs.problem, cs.optimizer.indicators.igd_ref_count,
          cs.optimizer.indicators.igd_ref_seed,
          (fs::path(plan.output_dir) / "pf_cache").string());
    }
  }

  std::vector<RunTask> tasks;
  for (std::size_t c = 0; c < plan.cases.size(); ++c) {
    for (std::size_t s = 0; s < plan.cases[c].seeds.size(); ++s) {
      tasks.push_back({c, s});
    }
  }
  std::vector<std::vector<RunRecord>> results(plan.cases.size());
  for (std::size_t c = 0; c < plan.cases.size(); ++c) {
    results[c].resize(plan.cases[c].seeds.size());
  }
  std::vector<char> ok(tasks.size(), 0);

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  const int pool = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
#ifdef _OPENMP
  const int hw = std::max(1u, std::thread::hardware_concurrency());
  const int omp_per_worker =
      std::getenv("OMP_NUM_THREADS") ? 0 : std::max(1, hw / pool);
#endif

  auto worker_fn = [&]() {
#ifdef _OPENMP
    if (omp_per_worker > 0) omp_set_num_threads(omp_per_worker);
#endif
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const RunTask& task = tasks[t];
      const CaseSpec& cs = plan.cases[task.case_index];
      const std::uint64_t seed = cs.seeds[task.seed_index];
      OptimizerConfig cfg = cs.optimizer;
      cfg.seed = seed;
      const fs::path run_dir = fs::path(plan.output_dir) / cs.name /
                               ("seed_" + std::to_string(seed));
      try {
        fs::create_directories(run_dir);
        cfg.dump_dir = run_dir.string();
        RunRecord record = run(cs.problem, cfg, igd_refs[task.case_index]);
        runio::write_record((run_dir / "record.json").string(), record);
        runio::write_metrics_csv((run_dir / "metrics.csv").string(), record);
        runio::write_matrix_csv((run_dir / "nds_archive.csv").string(),
                                record.final_iteration().nds_f);
        {
          std::lock_guard<std::mutex> lock(log_mutex);
          log << cs.name << " seed " << seed << ": hv "
              << record.final_iteration().hv << ", igd+ "
              << record.final_iteration().igd_plus << ", "
              << record.total_wall_seconds << " s\n";
        }
        results[task.case_index][task.seed_index] = std::move(record);
        ok[t] = 1;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(log_mutex);
        log << cs.name << " seed " << seed << " FAILED: " << e.what() << '\n';
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(pool));
  for (int i = 0; i < pool; ++i) threads.emplace_back(worker_fn);
  for (std::thread& th : threads) th.join();

  bool all_ok = true;
  for (char v : ok) all_ok = all_ok && v != 0;

  for (std::size_t c = 0; c < plan.cases.size(); ++c) {
    const CaseSpec& cs = plan.cases[c];
    const fs::path case_dir = fs::path(plan.output_dir) / cs.name;
    fs::create_directories(case_dir);
    write_case_meta(case_dir, cs);
    std::vector<RunRecord> completed;
    for (std::size_t s = 0; s < cs.seeds.size(); ++s) {
      if (!results[c][s].iterations.empty()) {
        completed.push_back(results[c][s]);
      }
    }
    if (!completed.empty()) {
      write_summary_csv(case_dir, cs, completed);
      write_convergence_csv(case_dir, completed);
    }
  }
  return all_ok ? 0 : 1;
}

namespace {

struct CaseSummary {
  std::string name, problem, mode;
  int objectives = 0;
  std::size_t runs = 0;
  double hv_mean = 0.0, igdp_mean = 0.0;
  bool valid = false;
};

CaseSummary summarize_case_dir(const fs::path& dir, std::ostream& out,
                               bool& partial) {
  CaseSummary cs;
  const fs::path meta_path = dir / "case.json";
  if (!fs::exists(meta_path)) return cs;
  try {
    std::ifstream in(meta_path);
    const nlohmann::json meta = nlohmann::json::parse(in);
    cs.name = meta.at("name").get<std::string>();
    cs.problem = meta.at("problem").get<std::string>();
    cs.objectives = meta.at("objectives").get<int>();
    cs.mode = meta.at("mode").get<std::string>();
  } catch (const std::exception& e) {
    out << "warning: unreadable case meta in " << dir << ": " << e.what()
        << '\n';
    partial = true;
    return cs;
  }
  Vec hv, igd;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_directory()) continue;
    const fs::path record_path = entry.path() / "record.json";
    if (!fs::exists(record_path)) continue;
    try {
      const RunRecord r = runio::read_record(record_path.string());
      hv.push_back(r.final_iteration().hv);
      if (!std::isnan(r.final_iteration().igd_plus)) {
        igd.push_back(r.final_iteration().igd_plus);
      }
    } catch (const std::exception& e) {
      out << "warning: skipping corrupt record " << record_path << ": "
          << e.what() << '\n';
      partial = true;
    }
  }
  if (hv.empty()) return cs;
  cs.runs = hv.size();
  cs.hv_mean = metrics::summarize(hv).mean;
  cs.igdp_mean = igd.empty() ? std::numeric_limits<double>::quiet_NaN()
                             : metrics::summarize(igd).mean;
  cs.valid = true;
  return cs;
}

}  // namespace

int report(const std::string& output_dir, std::ostream& out) {
  if (!fs::exists(output_dir)) {
    out << "no outputs found under " << output_dir << '\n';
    return 1;
  }
  bool partial = false;
  std::vector<CaseSummary> cases;
  for (const auto& entry : fs::directory_iterator(output_dir)) {
    if (!entry.is_directory()) continue;
    const CaseSummary cs = summarize_case_dir(entry.path(), out, partial);
    if (cs.valid) cases.push_back(cs);
  }
  if (cases.empty()) {
    out << "no completed cases under " << output_dir << '\n';
    return 1;
  }
  std::sort(cases.begin(), cases.end(),
            [](const CaseSummary& a, const CaseSummary& b) {
              return a.name < b.name;
            });
  out << "case                          problem   M  mode          runs  "
         "hv_mean      igdp_mean\n";
  for (const CaseSummary& cs : cases) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-29s %-9s %2d  %-13s %4zu  %-12.6g %-12.6g",
                  cs.name.c_str(), cs.problem.c_str(), cs.objectives,
                  cs.mode.c_str(), cs.runs, cs.hv_mean, cs.igdp_mean);
    out << line << '\n';
  }
  // adaptive-vs-baseline deltas per (problem, M)
  std::map<std::pair<std::string, int>, std::pair<const CaseSummary*, const CaseSummary*>>
      paired;
  for (const CaseSummary& cs : cases) {
    auto& slot = paired[{cs.problem, cs.objectives}];
    if (cs.mode == "srva") slot.first = &cs;
    if (cs.mode == "sld-baseline") slot.second = &cs;
  }
  for (const auto& [key, pair] : paired) {
    if (pair.first && pair.second) {
      char line[160];
      std::snprintf(line, sizeof(line),
                    "delta %-9s M=%d  srva - sld final hv: %+.6g",
                    key.first.c_str(), key.second,
                    pair.first->hv_mean - pair.second->hv_mean);
      out << line << '\n';
    }
  }
  return partial ? 2 : 0;
}

}  // namespace samo
