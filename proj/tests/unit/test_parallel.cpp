#include <doctest.h>

#include <cmath>

#include "samo/epbii.hpp"
#include "samo/kriging.hpp"
#include "samo/metrics.hpp"
#include "samo/optimizer.hpp"
#include "samo/runio.hpp"

// The OpenMP kernels are pure maps, so the parallel path must reproduce the
// serial reference bitwise regardless of thread count.

using namespace samo;

namespace {

kriging::Model fitted_model(std::uint64_t seed, Exec exec) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Mat X(40, Vec(4));
  Vec y(40);
  for (int i = 0; i < 40; ++i) {
    for (double& v : X[i]) v = uni(rng);
    y[i] = std::sin(4.0 * X[i][0]) + X[i][1] * X[i][2] - X[i][3];
  }
  kriging::GaConfig cfg;
  cfg.population = 16;
  cfg.generations = 10;
  cfg.seed = seed;
  return kriging::fit(X, y, Bounds::unit(4), cfg, exec);
}

Mat random_points(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Mat out(n, Vec(m));
  for (Vec& p : out) {
    for (double& v : p) v = uni(rng);
  }
  return out;
}

}  // namespace

TEST_CASE("prediction kernels: serial and parallel paths agree bitwise") {
  const kriging::Model model = fitted_model(3, Exec::Serial);
  const Mat probes = random_points(2000, 4, 11);

  Vec mean_serial, mean_parallel;
  kriging::predict_mean_batch(model, probes, mean_serial, Exec::Serial);
  kriging::predict_mean_batch(model, probes, mean_parallel, Exec::Parallel);
  CHECK(mean_serial == mean_parallel);

  std::vector<kriging::Prediction> ps, pp;
  kriging::predict_batch(model, probes, ps, Exec::Serial);
  kriging::predict_batch(model, probes, pp, Exec::Parallel);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    CHECK(ps[i].mean == pp[i].mean);
    CHECK(ps[i].variance == pp[i].variance);
  }
}

TEST_CASE("model fitting is exec-invariant") {
  const kriging::Model serial = fitted_model(5, Exec::Serial);
  const kriging::Model parallel = fitted_model(5, Exec::Parallel);
  CHECK(serial.theta() == parallel.theta());
  CHECK(serial.mu_hat() == parallel.mu_hat());
  CHECK(serial.sigma2_hat() == parallel.sigma2_hat());
}

TEST_CASE("payload batches are exec-invariant") {
  std::vector<kriging::Model> models{fitted_model(6, Exec::Serial),
                                     fitted_model(7, Exec::Serial)};
  const pareto::NadirUtopia nu{{2.0, 2.0}, {-2.0, -2.0}};
  const Mat probes = random_points(500, 4, 13);
  CHECK(epbii::payload_batch(probes, models, nu, Exec::Serial) ==
        epbii::payload_batch(probes, models, nu, Exec::Parallel));
}

TEST_CASE("monte carlo hypervolume is exec-invariant") {
  const Mat pts = random_points(30, 6, 17);
  const Vec ref(6, 1.2);
  const auto serial =
      metrics::hypervolume_mc(pts, ref, 200000, 23, nullptr, Exec::Serial);
  const auto parallel =
      metrics::hypervolume_mc(pts, ref, 200000, 23, nullptr, Exec::Parallel);
  CHECK(serial.value == parallel.value);
  CHECK(serial.std_error == parallel.std_error);
}

TEST_CASE("igd+ is exec-invariant") {
  const Mat pts = random_points(60, 3, 19);
  const Mat refs = random_points(500, 3, 29);
  CHECK(metrics::igd_plus(pts, refs, Exec::Serial) ==
        metrics::igd_plus(pts, refs, Exec::Parallel));
}

TEST_CASE("whole runs are exec-invariant") {
  const ProblemSpec problem = make_problem("dtlz2", 3, 10);
  OptimizerConfig cfg;
  cfg.n_init = 12;
  cfg.n_max = 16;
  cfg.n_add = 4;
  cfg.n_ref = 8;
  cfg.nsga3_h1 = 8;
  cfg.nsga3_generations = 6;
  cfg.moead_generations = 4;
  cfg.likelihood_ga.population = 12;
  cfg.likelihood_ga.generations = 5;
  cfg.extreme_ga.population = 8;
  cfg.extreme_ga.generations = 6;
  cfg.indicators.hv_ref = {1.1, 1.1, 1.1};
  cfg.seed = 31;
  cfg.exec = Exec::Serial;
  const RunRecord serial = run(problem, cfg, {});
  cfg.exec = Exec::Parallel;
  const RunRecord parallel = run(problem, cfg, {});
  CHECK(runio::record_to_json(serial, false).dump() ==
        runio::record_to_json(parallel, false).dump());
}
