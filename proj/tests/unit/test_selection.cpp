#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "samo/pareto.hpp"
#include "samo/selection.hpp"

using namespace samo;
using namespace samo::selection;

namespace {

srva::ReferenceVectorSet unit_refs(const Mat& raw, std::vector<int> cluster) {
  return srva::to_unit_vectors(raw, std::move(cluster));
}

}  // namespace

TEST_CASE("correction function is continuous at the junction") {
  CHECK(correction(0.0) == 0.0);
  CHECK(correction(1.0) == 1.0);
  CHECK(correction(1.0 - 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(correction(1.0 + 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(correction(0.5) == doctest::Approx(0.25));
  CHECK(correction(2.0) == doctest::Approx(3.0));
}

TEST_CASE("niche count reduces to the own-territory count when isolated") {
  epbii::TerritoryContext ctx;
  ctx.d_min = 0.5;
  ctx.d_ij = {{0.0, 2.0, 3.0}, {2.0, 0.0, 2.5}, {3.0, 2.5, 0.0}};
  NicheState state;
  state.n_nds = {4, 0, 0};
  // d_ii = 0 so h(0) = 0 and the denominator is 1
  CHECK(niche_count(0, state, ctx) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("niche count equals the direct summation oracle") {
  Rng rng = make_rng(60);
  std::uniform_real_distribution<double> uni(0.1, 2.0);
  std::uniform_int_distribution<int> occupancy(0, 5);
  const std::size_t n = 10;
  epbii::TerritoryContext ctx;
  ctx.d_min = 0.37;
  ctx.d_ij.assign(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ctx.d_ij[i][j] = ctx.d_ij[j][i] = uni(rng);
    }
  }
  NicheState state;
  for (std::size_t j = 0; j < n; ++j) state.n_nds.push_back(occupancy(rng));

  for (std::size_t i = 0; i < n; ++i) {
    double expected = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = ctx.d_ij[i][j] / ctx.d_min;
      const double h = x > 1.0 ? 2.0 * x - 1.0 : x * x;
      expected += static_cast<double>(state.n_nds[j]) / (h + 1.0);
    }
    CHECK(niche_count(i, state, ctx) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("fitness arithmetic and the zero-niche clamp") {
  CHECK(fitness(0.2, 2.0, 1) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(fitness(0.2, 2.0, 2) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(fitness(0.2, 0.0, 1) == doctest::Approx(0.2 / 1e-12));
  CHECK(fitness(-0.3, 2.0, 1) < 0.0);  // sign preserved
}

TEST_CASE("single cluster selection takes the fitness argmax") {
  const Mat raw{{1.0, 0.1}, {0.8, 0.6}, {0.1, 1.0}};
  auto refs = unit_refs(raw, {0, 0, 0});
  epbii::TerritoryContext ctx = epbii::compute_theta_ref(refs);
  CandidateTable table;
  table.x = {{0.1, 0.1}, {0.5, 0.5}, {0.9, 0.9}};
  table.epbii = {0.1, 0.5, 0.2};
  table.f_norm = {{0.9, 0.2}, {0.5, 0.5}, {0.2, 0.9}};
  table.rank = pareto::nondominated_sort(table.f_norm);
  table.cluster = {0, 0, 0};
  NicheState state;
  state.n_nds.assign(3, 0);
  Rng rng = make_rng(1);
  const Mat picks =
      select_additional(table, 1, state, ctx, refs, Bounds::unit(2), {}, rng);
  REQUIRE(picks.size() == 1);
  CHECK(picks[0] == table.x[1]);
}

TEST_CASE("a pick raises niche counts for later clusters") {
  // two reference vectors, two clusters; both candidates sit inside both
  // territories, so the first pick bumps the second cluster's niche count
  const Mat raw{{0.8, 0.6}, {0.6, 0.8}};
  auto refs = unit_refs(raw, {0, 1});
  epbii::TerritoryContext ctx = epbii::compute_theta_ref(refs);
  ctx.theta_ref = 0.2;  // wide territories so both members land everywhere
  CandidateTable table;
  table.x = {{0.2, 0.2}, {0.8, 0.8}};
  table.epbii = {0.4, 0.4};
  table.f_norm = {{0.7, 0.7}, {0.72, 0.68}};
  table.rank = pareto::nondominated_sort(table.f_norm);
  table.cluster = {0, 1};
  NicheState state;
  state.n_nds.assign(2, 0);
  Rng rng = make_rng(2);
  const NicheState before = state;
  const Mat picks =
      select_additional(table, 2, state, ctx, refs, Bounds::unit(2), {}, rng);
  CHECK(picks.size() == 2);
  CHECK(state.n_nds[0] > before.n_nds[0]);
  CHECK(state.n_nds[1] > before.n_nds[1]);
}

TEST_CASE("cluster-wise selection replays the step-by-step oracle") {
  Rng rng = make_rng(61);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const Mat simplex = pareto::sld_vectors(3, 12);  // 91 vectors
  Rng krng = make_rng(62);
  std::vector<int> labels = srva::cluster_reference_solutions(simplex, 10, krng);
  auto refs = srva::to_unit_vectors(simplex, labels);
  epbii::TerritoryContext ctx = epbii::compute_theta_ref(refs);

  CandidateTable table;
  for (std::size_t i = 0; i < 91; ++i) {
    table.x.push_back({uni(rng), uni(rng), uni(rng)});
    table.epbii.push_back(uni(rng));
    table.f_norm.push_back({0.1 + uni(rng), 0.1 + uni(rng), 0.1 + uni(rng)});
  }
  table.rank = pareto::nondominated_sort(table.f_norm);
  table.cluster = refs.cluster;

  Mat nds_norm(25, Vec(3));
  for (Vec& f : nds_norm) {
    for (double& v : f) v = uni(rng);
  }
  NicheState state = init_niche_state(nds_norm, refs, ctx.theta_ref);

  // oracle: independent replay of the selection loop
  std::vector<int> oracle_nds = state.n_nds;
  std::vector<std::size_t> oracle_picks;
  for (int cluster = 0; cluster < 10; ++cluster) {
    double best_fit = -std::numeric_limits<double>::infinity();
    std::size_t best = 91;
    for (std::size_t i = 0; i < 91; ++i) {
      if (table.cluster[i] != cluster) continue;
      double nc = 0.0;
      for (std::size_t j = 0; j < 91; ++j) {
        const double x = ctx.d_ij[i][j] / ctx.d_min;
        const double h = x > 1.0 ? 2.0 * x - 1.0 : x * x;
        nc += static_cast<double>(oracle_nds[j]) / (h + 1.0);
      }
      const double fit =
          table.epbii[i] / (std::max(nc, 1e-12) * table.rank[i]);
      if (best == 91 || fit > best_fit) {
        best = i;
        best_fit = fit;
      }
    }
    oracle_picks.push_back(best);
    for (std::size_t j = 0; j < 91; ++j) {
      if (epbii::territory(table.f_norm[best], refs.vectors[j],
                           ctx.theta_ref) >= 0.0) {
        ++oracle_nds[j];
      }
    }
  }

  NicheState state_impl = init_niche_state(nds_norm, refs, ctx.theta_ref);
  Rng jrng = make_rng(63);
  const Mat picks = select_additional(table, 10, state_impl, ctx, refs,
                                      Bounds::unit(3), {}, jrng);
  REQUIRE(picks.size() == 10);
  for (int c = 0; c < 10; ++c) {
    CHECK(picks[c] == table.x[oracle_picks[c]]);
  }
  CHECK(state_impl.n_nds == oracle_nds);
}

TEST_CASE("fitness ordering is invariant under positive epbii rescaling") {
  Rng rng = make_rng(64);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const Mat raw{{1.0, 0.2}, {0.7, 0.7}, {0.2, 1.0}, {0.9, 0.5}};
  auto refs = unit_refs(raw, {0, 1, 0, 1});
  epbii::TerritoryContext ctx = epbii::compute_theta_ref(refs);
  CandidateTable table;
  for (int i = 0; i < 4; ++i) {
    table.x.push_back({uni(rng), uni(rng)});
    table.epbii.push_back(0.1 + uni(rng));
    table.f_norm.push_back({uni(rng), uni(rng)});
  }
  table.rank = pareto::nondominated_sort(table.f_norm);
  table.cluster = refs.cluster;
  NicheState s1;
  s1.n_nds.assign(4, 1);
  NicheState s2 = s1;
  Rng r1 = make_rng(5), r2 = make_rng(5);
  const Mat picks1 =
      select_additional(table, 2, s1, ctx, refs, Bounds::unit(2), {}, r1);
  CandidateTable scaled = table;
  for (double& v : scaled.epbii) v *= 37.5;
  const Mat picks2 =
      select_additional(scaled, 2, s2, ctx, refs, Bounds::unit(2), {}, r2);
  CHECK(picks1 == picks2);
}

TEST_CASE("duplicate picks get jittered into distinct evaluations") {
  const Mat raw{{1.0, 0.2}, {0.2, 1.0}};
  auto refs = unit_refs(raw, {0, 1});
  epbii::TerritoryContext ctx = epbii::compute_theta_ref(refs);
  CandidateTable table;
  table.x = {{0.5, 0.5}, {0.5, 0.5}};  // identical designs across clusters
  table.epbii = {0.3, 0.3};
  table.f_norm = {{0.5, 0.5}, {0.5, 0.5}};
  table.rank = pareto::nondominated_sort(table.f_norm);
  table.cluster = {0, 1};
  NicheState state;
  state.n_nds.assign(2, 0);
  Rng rng = make_rng(7);
  const Bounds bounds = Bounds::unit(2);
  const Mat existing{{0.5, 0.5}};  // the point is already archived too
  const Mat picks =
      select_additional(table, 2, state, ctx, refs, bounds, existing, rng);
  REQUIRE(picks.size() == 2);
  CHECK(picks[0] != existing[0]);
  CHECK(picks[1] != picks[0]);
  for (const Vec& p : picks) {
    CHECK(bounds.contains(p));
    CHECK(std::abs(p[0] - 0.5) <= 1e-6);
    CHECK(std::abs(p[1] - 0.5) <= 1e-6);
  }
}
