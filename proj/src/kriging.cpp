#include "samo/kriging.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace samo::kriging {

double correlation(const Vec& a, const Vec& b, const Vec& theta) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += theta[k] * d * d;
  }
  return std::exp(-s);
}

namespace {

LikelihoodEval eval_from_correlation(Eigen::MatrixXd& R,
                                     const Eigen::VectorXd& y,
                                     double nugget_start, double nugget_max,
                                     Eigen::LLT<Eigen::MatrixXd>& llt) {
  const int n = static_cast<int>(R.rows());
  LikelihoodEval out;
  double nugget = nugget_start;
  double added = 0.0;
  while (true) {
    for (int i = 0; i < n; ++i) R(i, i) += nugget - added;
    added = nugget;
    llt.compute(R);
    if (llt.info() == Eigen::Success) break;
    if (nugget >= nugget_max) {
      out.nugget = nugget;
      return out;  // not factorizable
    }
    nugget = std::min(nugget * 10.0, nugget_max);
  }
  out.factorized = true;
  out.nugget = nugget;

  double log_det = 0.0;
  for (int i = 0; i < n; ++i) log_det += std::log(llt.matrixLLT()(i, i));
  log_det *= 2.0;

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd rinv_y = llt.solve(y);
  const Eigen::VectorXd rinv_1 = llt.solve(ones);
  const double denom = ones.dot(rinv_1);
  out.mu_hat = ones.dot(rinv_y) / denom;
  const Eigen::VectorXd res = y - out.mu_hat * ones;
  const Eigen::VectorXd rinv_res = rinv_y - out.mu_hat * rinv_1;
  const double sigma2 = res.dot(rinv_res) / static_cast<double>(n);
  out.sigma2_hat = std::max(sigma2, 0.0);
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    out.value = kLikelihoodUndefined;  // likelihood undefined
    return out;
  }
  out.value = -0.5 * (static_cast<double>(n) * std::log(sigma2) + log_det);
  return out;
}

// Squared per-dimension differences for every pair i > j, packed row-major.
struct PackedDistances {
  std::size_t n = 0, m = 0;
  std::vector<double> d2;

  void build(const Eigen::MatrixXd& X) {
    n = static_cast<std::size_t>(X.rows());
    m = static_cast<std::size_t>(X.cols());
    d2.resize(n * (n - 1) / 2 * m);
    std::size_t p = 0;
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
          const double d = X(static_cast<int>(i), static_cast<int>(k)) -
                           X(static_cast<int>(j), static_cast<int>(k));
          d2[p++] = d * d;
        }
      }
    }
  }

  void fill_correlation(const Vec& theta, Eigen::MatrixXd& R) const {
    R.resize(static_cast<int>(n), static_cast<int>(n));
    const double* pd = d2.data();
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += theta[k] * pd[k];
        pd += m;
        const double r = std::exp(-s);
        R(static_cast<int>(i), static_cast<int>(j)) = r;
        R(static_cast<int>(j), static_cast<int>(i)) = r;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      R(static_cast<int>(i), static_cast<int>(i)) = 1.0;
    }
  }
};

LikelihoodEval eval_packed(const PackedDistances& pd, const Eigen::VectorXd& y,
                           const Vec& theta, double nugget_start,
                           double nugget_max) {
  static thread_local Eigen::MatrixXd R;
  static thread_local Eigen::LLT<Eigen::MatrixXd> llt;
  pd.fill_correlation(theta, R);
  return eval_from_correlation(R, y, nugget_start, nugget_max, llt);
}

}  // namespace

LikelihoodEval log_likelihood(const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y,
                              const Eigen::VectorXd& theta,
                              double nugget_start, double nugget_max) {
  const int n = static_cast<int>(X.rows());
  const int m = static_cast<int>(X.cols());
  Eigen::MatrixXd R(n, n);
  for (int i = 0; i < n; ++i) {
    R(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) {
        const double d = X(i, k) - X(j, k);
        s += theta(k) * d * d;
      }
      R(i, j) = R(j, i) = std::exp(-s);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt;
  return eval_from_correlation(R, y, nugget_start, nugget_max, llt);
}

Model fit(const Mat& X, const Vec& y, const Bounds& bounds,
          const GaConfig& cfg, Exec exec) {
  if (X.size() != y.size()) {
    throw std::invalid_argument("kriging fit: X and y size mismatch");
  }
  // Collapse duplicate rows keeping the most recent observation.
  std::map<Vec, std::size_t> slot;
  Mat xs;
  Vec ys;
  for (std::size_t i = 0; i < X.size(); ++i) {
    auto it = slot.find(X[i]);
    if (it == slot.end()) {
      slot.emplace(X[i], xs.size());
      xs.push_back(X[i]);
      ys.push_back(y[i]);
    } else {
      ys[it->second] = y[i];
    }
  }
  const std::size_t n = xs.size();
  if (n < 2) {
    throw std::invalid_argument(
        "kriging fit: need at least 2 distinct training points");
  }
  const std::size_t m = bounds.dim();

  Model model;
  model.bounds_ = bounds;
  model.X_.resize(static_cast<int>(n), static_cast<int>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      model.X_(static_cast<int>(i), static_cast<int>(k)) =
          (xs[i][k] - bounds.lower[k]) / (bounds.upper[k] - bounds.lower[k]);
    }
  }

  const auto [lo_it, hi_it] = std::minmax_element(ys.begin(), ys.end());
  double mean = 0.0;
  for (double v : ys) mean += v;
  mean /= static_cast<double>(n);
  model.y_mean_ = mean;
  if (*hi_it == *lo_it) {
    model.constant_ = true;
    model.theta_.assign(m, 0.0);
    return model;
  }
  double var = 0.0;
  for (double v : ys) var += (v - mean) * (v - mean);
  model.y_std_ = std::sqrt(var / static_cast<double>(n));

  Eigen::VectorXd ystd(static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    ystd(static_cast<int>(i)) = (ys[i] - mean) / model.y_std_;
  }

  PackedDistances packed;
  packed.build(model.X_);

  const auto objective = [&](const Mat& genes) {
    Vec out(genes.size());
    for_each_index(genes.size(), exec, [&](std::size_t i) {
      Vec theta(m);
      for (std::size_t k = 0; k < m; ++k) theta[k] = std::pow(10.0, genes[i][k]);
      const LikelihoodEval ev =
          eval_packed(packed, ystd, theta, kDefaultNugget, kMaxNugget);
      out[i] = -ev.value;
    });
    return out;
  };

  ea::EAConfig ga;
  ga.population = cfg.population;
  ga.generations = cfg.generations;
  ga.sbx_eta = cfg.sbx_eta;
  ga.sbx_prob = cfg.sbx_prob;
  ga.mutation_eta = cfg.mutation_eta;
  ga.mutation_prob = -1.0;
  ga.seed = cfg.seed;
  Bounds gene_bounds{Vec(m, cfg.log10_theta_min), Vec(m, cfg.log10_theta_max)};
  const ea::BestIndividual best =
      ea::run_single_objective_ga(objective, gene_bounds, ga);

  model.theta_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    model.theta_[k] = std::pow(10.0, best.x[k]);
  }

  Eigen::MatrixXd R;
  packed.fill_correlation(model.theta_, R);
  Eigen::LLT<Eigen::MatrixXd> llt;
  const LikelihoodEval ev =
      eval_from_correlation(R, ystd, kDefaultNugget, kMaxNugget, llt);
  if (!ev.factorized) {
    throw std::runtime_error(
        "kriging fit: correlation matrix not factorizable at nugget cap");
  }
  model.mu_hat_ = ev.mu_hat;
  model.sigma2_hat_ = ev.sigma2_hat;
  model.nugget_ = ev.nugget;
  model.L_ = llt.matrixL();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<int>(n));
  model.alpha_ = llt.solve(ystd - model.mu_hat_ * ones);
  model.v_ = model.L_.triangularView<Eigen::Lower>().solve(ones);
  model.one_rinv_one_ = model.v_.squaredNorm();
  return model;
}

void Model::scale_point(const Vec& x, Eigen::VectorXd& out) const {
  const std::size_t m = bounds_.dim();
  out.resize(static_cast<int>(m));
  for (std::size_t k = 0; k < m; ++k) {
    out(static_cast<int>(k)) = (x[k] - bounds_.lower[k]) /
                               (bounds_.upper[k] - bounds_.lower[k]);
  }
}

double Model::predict_mean(const Vec& x) const {
  if (constant_) return y_mean_;
  const int n = static_cast<int>(X_.rows());
  const int m = static_cast<int>(X_.cols());
  Eigen::VectorXd xs;
  scale_point(x, xs);
  double mean = mu_hat_;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
      const double d = xs(k) - X_(i, k);
      s += theta_[k] * d * d;
    }
    mean += std::exp(-s) * alpha_(i);
  }
  return y_mean_ + y_std_ * mean;
}

Prediction Model::predict(const Vec& x) const {
  if (constant_) return {y_mean_, 0.0};
  const int n = static_cast<int>(X_.rows());
  const int m = static_cast<int>(X_.cols());
  Eigen::VectorXd xs;
  scale_point(x, xs);
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
      const double d = xs(k) - X_(i, k);
      s += theta_[k] * d * d;
    }
    r(i) = std::exp(-s);
  }
  const double mean_s = mu_hat_ + r.dot(alpha_);
  const Eigen::VectorXd u = L_.triangularView<Eigen::Lower>().solve(r);
  const double r_rinv_r = u.squaredNorm();
  const double one_rinv_r = v_.dot(u);
  const double var_s =
      sigma2_hat_ * (1.0 - r_rinv_r +
                     (1.0 - one_rinv_r) * (1.0 - one_rinv_r) / one_rinv_one_);
  Prediction p;
  p.mean = y_mean_ + y_std_ * mean_s;
  p.variance = std::max(var_s, 0.0) * y_std_ * y_std_;
  return p;
}

void predict_mean_batch(const Model& model, const Mat& X, Vec& out,
                        Exec exec) {
  out.resize(X.size());
  for_each_index(X.size(), exec,
                 [&](std::size_t i) { out[i] = model.predict_mean(X[i]); });
}

void predict_batch(const Model& model, const Mat& X,
                   std::vector<Prediction>& out, Exec exec) {
  out.resize(X.size());
  for_each_index(X.size(), exec,
                 [&](std::size_t i) { out[i] = model.predict(X[i]); });
}

}  // namespace samo::kriging
