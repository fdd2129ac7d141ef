#include "samo/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace samo::selection {

double correction(double x) { return x > 1.0 ? 2.0 * x - 1.0 : x * x; }

double niche_count(std::size_t i, const NicheState& state,
                   const epbii::TerritoryContext& ctx) {
  double nc = 0.0;
  const Vec& row = ctx.d_ij[i];
  for (std::size_t j = 0; j < state.n_nds.size(); ++j) {
    if (state.n_nds[j] == 0) continue;
    nc += static_cast<double>(state.n_nds[j]) /
          (correction(row[j] / ctx.d_min) + 1.0);
  }
  return nc;
}

double fitness(double epbii_value, double nc, int rank) {
  return epbii_value / (std::max(nc, 1e-12) * static_cast<double>(rank));
}

NicheState init_niche_state(const Mat& nds_norm,
                            const srva::ReferenceVectorSet& refs,
                            double theta_ref) {
  NicheState state;
  state.n_nds.assign(refs.vectors.size(), 0);
  for (const Vec& f : nds_norm) {
    for (std::size_t j = 0; j < refs.vectors.size(); ++j) {
      if (epbii::territory(f, refs.vectors[j], theta_ref) >= 0.0) {
        ++state.n_nds[j];
      }
    }
  }
  return state;
}

Mat select_additional(const CandidateTable& table, int n_add,
                      NicheState& state, const epbii::TerritoryContext& ctx,
                      const srva::ReferenceVectorSet& refs,
                      const Bounds& bounds, const Mat& existing_x, Rng& rng) {
  const std::size_t n_cand = table.x.size();
  std::set<Vec> used(existing_x.begin(), existing_x.end());
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Mat picks;
  picks.reserve(static_cast<std::size_t>(n_add));

  for (int cluster = 0; cluster < n_add; ++cluster) {
    std::size_t best = n_cand;
    double best_fitness = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_cand; ++i) {
      if (table.cluster[i] != cluster) continue;
      const double nc = niche_count(i, state, ctx);
      const double fit = fitness(table.epbii[i], nc, table.rank[i]);
      if (best == n_cand || fit > best_fitness) {
        best = i;
        best_fitness = fit;
      }
    }
    if (best == n_cand) {
      throw std::logic_error("select_additional: cluster without candidates");
    }

    Vec x = table.x[best];
    if (used.count(x) > 0) {
      for (std::size_t k = 0; k < x.size(); ++k) {
        x[k] += uni(rng) * 1e-6 * (bounds.upper[k] - bounds.lower[k]);
      }
      bounds.clip(x);
    }
    used.insert(x);
    picks.push_back(std::move(x));

    // fold the pick's estimated objectives into every territory it falls in
    for (std::size_t j = 0; j < refs.vectors.size(); ++j) {
      if (epbii::territory(table.f_norm[best], refs.vectors[j],
                           ctx.theta_ref) >= 0.0) {
        ++state.n_nds[j];
      }
    }
  }
  return picks;
}

}  // namespace samo::selection
