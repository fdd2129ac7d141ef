#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "samo/ea.hpp"
#include "samo/pareto.hpp"
#include "samo/problems.hpp"

using namespace samo;
using namespace samo::ea;

TEST_CASE("sbx with zero probability copies the parents") {
  const Bounds b = Bounds::unit(3);
  const Vec p1{0.2, 0.5, 0.9}, p2{0.8, 0.1, 0.3};
  Rng rng = make_rng(1);
  Vec c1, c2;
  sbx_crossover(p1, p2, b, 15.0, 0.0, rng, c1, c2);
  CHECK(c1 == p1);
  CHECK(c2 == p2);
}

TEST_CASE("sbx is degenerate for identical parents") {
  const Bounds b = Bounds::unit(2);
  const Vec p{0.4, 0.6};
  Rng rng = make_rng(2);
  Vec c1, c2;
  for (int rep = 0; rep < 100; ++rep) {
    sbx_crossover(p, p, b, 15.0, 1.0, rng, c1, c2);
    CHECK(c1 == p);
    CHECK(c2 == p);
  }
}

TEST_CASE("sbx children are centered on the parent midpoint") {
  const Bounds b = Bounds::unit(3);
  const Vec p1{0.2, 0.5, 0.9}, p2{0.8, 0.1, 0.3};
  Rng rng = make_rng(3);
  const int reps = 10000;
  Mat children;
  Vec c1, c2;
  for (int rep = 0; rep < reps; ++rep) {
    sbx_crossover(p1, p2, b, 15.0, 1.0, rng, c1, c2);
    children.push_back(c1);
    children.push_back(c2);
  }
  for (int k = 0; k < 3; ++k) {
    const double mid = 0.5 * (p1[k] + p2[k]);
    double mean = 0.0;
    for (const Vec& c : children) mean += c[k];
    mean /= static_cast<double>(children.size());
    double var = 0.0;
    for (const Vec& c : children) var += (c[k] - mean) * (c[k] - mean);
    var /= static_cast<double>(children.size() - 1);
    const double se = std::sqrt(var / static_cast<double>(children.size()));
    CHECK(std::abs(mean - mid) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("operators respect bounds under fuzzing") {
  const Bounds b{{-1.0, 0.0, 2.0}, {1.0, 0.5, 8.0}};
  Rng rng = make_rng(4);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Vec p1(3), p2(3), c1, c2;
  for (int rep = 0; rep < 50000; ++rep) {
    for (int k = 0; k < 3; ++k) {
      p1[k] = b.lower[k] + uni(rng) * (b.upper[k] - b.lower[k]);
      p2[k] = b.lower[k] + uni(rng) * (b.upper[k] - b.lower[k]);
    }
    sbx_crossover(p1, p2, b, 2.0, 1.0, rng, c1, c2);
    CHECK(b.contains(c1));
    CHECK(b.contains(c2));
    polynomial_mutation(c1, b, 5.0, 1.0, rng);
    CHECK(b.contains(c1));
  }
}

TEST_CASE("single-objective ga minimizes the sphere") {
  const Bounds b = Bounds::unit(10);
  const auto sphere = batchify(
      [](const Vec& x) {
        double s = 0.0;
        for (double v : x) s += (v - 0.3) * (v - 0.3);
        return s;
      },
      Exec::Serial);
  EAConfig cfg;
  cfg.population = 50;
  cfg.generations = 100;
  cfg.seed = 11;
  const BestIndividual best = run_single_objective_ga(sphere, b, cfg);
  CHECK(best.value < 1e-2);

  const BestIndividual again = run_single_objective_ga(sphere, b, cfg);
  CHECK(again.x == best.x);  // bitwise determinism
}

TEST_CASE("single-objective ga on a constant landscape") {
  const Bounds b = Bounds::unit(4);
  const auto flat = batchify([](const Vec&) { return 7.5; }, Exec::Serial);
  EAConfig cfg;
  cfg.population = 10;
  cfg.generations = 5;
  cfg.seed = 1;
  const BestIndividual best = run_single_objective_ga(flat, b, cfg);
  CHECK(best.value == 7.5);
  CHECK(b.contains(best.x));
}

TEST_CASE("nsga3 derives its population from the reference-point count") {
  // 91 simplex points -> population rounded up to 92; 714 -> 716
  CHECK((pareto::sld_vectors(3, 12).size() + 3) / 4 * 4 == 92);
  CHECK((pareto::two_layer_sld(6, 6, 5).size() + 3) / 4 * 4 == 716);
}

TEST_CASE("nsga3 converges to the dtlz2 sphere") {
  const ProblemSpec problem = make_problem("dtlz2", 3, 10);
  const auto objectives = batchify_vec(
      [&](const Vec& x) { return evaluate(problem, x); }, Exec::Parallel);
  EAConfig cfg;
  cfg.generations = 200;
  cfg.seed = 21;
  const FrontEstimate fe =
      run_nsga3(objectives, problem.bounds, pareto::sld_vectors(3, 12), cfg);
  REQUIRE(!fe.F.empty());
  std::size_t near = 0;
  for (const Vec& f : fe.F) {
    if (std::abs(std::sqrt(norm2(f)) - 1.0) < 0.05) ++near;
  }
  CHECK(static_cast<double>(near) >=
        0.9 * static_cast<double>(fe.F.size()));
}

TEST_CASE("one nsga3 generation returns evaluated individuals") {
  const ProblemSpec problem = make_problem("dtlz2", 3, 10);
  const auto objectives = batchify_vec(
      [&](const Vec& x) { return evaluate(problem, x); }, Exec::Serial);
  EAConfig cfg;
  cfg.generations = 1;
  cfg.seed = 5;
  const FrontEstimate fe =
      run_nsga3(objectives, problem.bounds, pareto::sld_vectors(3, 4), cfg);
  REQUIRE(!fe.X.empty());
  for (std::size_t i = 0; i < fe.X.size(); ++i) {
    CHECK(evaluate(problem, fe.X[i]) == fe.F[i]);  // self-consistent pairs
  }
  const FrontEstimate fe2 =
      run_nsga3(objectives, problem.bounds, pareto::sld_vectors(3, 4), cfg);
  CHECK(fe2.X == fe.X);  // determinism
}

namespace {

// five smooth unimodal targets on [0,1]^2, maxima strictly inside
MoeadSubproblems toy_subproblems(const Mat& centers) {
  MoeadSubproblems sub;
  sub.count = centers.size();
  sub.prepare_batch = [](const Mat& X) { return X; };
  sub.value = [centers](std::size_t i, const Vec& x) {
    return 1.0 / (1.0 + 8.0 * squared_distance(x, centers[i]));
  };
  return sub;
}

}  // namespace

TEST_CASE("moead with zero generations returns the evaluated seeds") {
  const Mat centers{{0.1, 0.9}, {0.3, 0.6}, {0.5, 0.5}, {0.7, 0.3}, {0.9, 0.1}};
  const MoeadSubproblems sub = toy_subproblems(centers);
  const Mat init{{0.5, 0.5}, {0.4, 0.4}, {0.6, 0.6}, {0.2, 0.2}, {0.8, 0.8}};
  Mat positions{{1.0, 0.0}, {0.9, 0.3}, {0.7, 0.7}, {0.3, 0.9}, {0.0, 1.0}};
  EAConfig cfg;
  cfg.generations = 0;
  cfg.seed = 3;
  const MoeadResult res =
      run_moead(sub, init, Bounds::unit(2), positions, cfg);
  CHECK(res.best_x == init);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(res.best_value[i] == sub.value(i, init[i]));
  }
}

TEST_CASE("moead never loses ground against its seeds") {
  const Mat centers{{0.1, 0.9}, {0.3, 0.6}, {0.5, 0.5}, {0.7, 0.3}, {0.9, 0.1}};
  const MoeadSubproblems sub = toy_subproblems(centers);
  const Mat init{{0.5, 0.5}, {0.4, 0.4}, {0.6, 0.6}, {0.2, 0.2}, {0.8, 0.8}};
  Mat positions{{1.0, 0.0}, {0.9, 0.3}, {0.7, 0.7}, {0.3, 0.9}, {0.0, 1.0}};
  EAConfig cfg;
  cfg.generations = 30;
  cfg.seed = 4;
  const MoeadResult res =
      run_moead(sub, init, Bounds::unit(2), positions, cfg);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(res.best_value[i] >= sub.value(i, init[i]));
  }
}

TEST_CASE("moead tracks the random-search oracle on the toy landscape") {
  const Mat centers{{0.1, 0.9}, {0.3, 0.6}, {0.5, 0.5}, {0.7, 0.3}, {0.9, 0.1}};
  const MoeadSubproblems sub = toy_subproblems(centers);
  const Mat init{{0.5, 0.9}, {0.1, 0.1}, {0.9, 0.9}, {0.2, 0.8}, {0.4, 0.2}};
  Mat positions{{1.0, 0.0}, {0.9, 0.3}, {0.7, 0.7}, {0.3, 0.9}, {0.0, 1.0}};
  EAConfig cfg;
  cfg.generations = 200;
  cfg.seed = 6;
  const MoeadResult res =
      run_moead(sub, init, Bounds::unit(2), positions, cfg);

  Rng rng = make_rng(99);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Vec oracle(5, -1.0);
  for (long long draw = 0; draw < 1000000; ++draw) {
    const Vec x{uni(rng), uni(rng)};
    for (std::size_t i = 0; i < 5; ++i) {
      oracle[i] = std::max(oracle[i], sub.value(i, x));
    }
  }
  int within = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    if (res.best_value[i] >= 0.95 * oracle[i]) ++within;
  }
  CHECK(within >= 4);
}
