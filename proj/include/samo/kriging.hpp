#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "samo/common.hpp"
#include "samo/ea.hpp"
#include "samo/parallel.hpp"

namespace samo::kriging {

// GA settings for concentrated log-likelihood maximization over log10(theta).
struct GaConfig {
  int population = 50;
  int generations = 50;
  double log10_theta_min = -3.0;
  double log10_theta_max = 3.0;
  double sbx_eta = 15.0;
  double sbx_prob = 0.9;
  double mutation_eta = 20.0;  // probability defaults to 1/m at fit time
  std::uint64_t seed = 0;
};

constexpr double kLikelihoodUndefined = -1e300;
constexpr double kDefaultNugget = 1e-10;
constexpr double kMaxNugget = 1e-4;

struct LikelihoodEval {
  double value = kLikelihoodUndefined;  // -1/2 (n ln s2 + ln|R|)
  double mu_hat = 0.0;
  double sigma2_hat = 0.0;
  double nugget = 0.0;  // nugget the factorization succeeded with
  bool factorized = false;
};

double correlation(const Vec& a, const Vec& b, const Vec& theta);

// Concentrated log-likelihood with analytic mu/sigma2. Climbs the nugget
// ladder (x10 per step up to nugget_max) on factorization failure; a
// degenerate sigma2 <= 0 yields the undefined sentinel.
LikelihoodEval log_likelihood(const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y,
                              const Eigen::VectorXd& theta,
                              double nugget_start = kDefaultNugget,
                              double nugget_max = kMaxNugget);

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

// Ordinary Kriging surrogate for one objective. Inputs are scaled to the
// unit hypercube and outputs standardized before fitting; predictions are
// returned in original units. Immutable once fitted.
class Model {
 public:
  Prediction predict(const Vec& x) const;
  double predict_mean(const Vec& x) const;

  const Vec& theta() const { return theta_; }
  double mu_hat() const { return mu_hat_; }
  double sigma2_hat() const { return sigma2_hat_; }  // standardized scale
  double nugget() const { return nugget_; }
  double output_std() const { return y_std_; }
  bool constant() const { return constant_; }
  std::size_t sample_count() const {
    return static_cast<std::size_t>(X_.rows());
  }

 private:
  friend Model fit(const Mat&, const Vec&, const Bounds&, const GaConfig&,
                   Exec);

  Bounds bounds_;
  Eigen::MatrixXd X_;  // scaled training inputs
  Vec theta_;
  double mu_hat_ = 0.0;
  double sigma2_hat_ = 0.0;
  double nugget_ = 0.0;
  double y_mean_ = 0.0;
  double y_std_ = 1.0;
  bool constant_ = false;
  Eigen::MatrixXd L_;       // lower Cholesky factor of R + nugget*I
  Eigen::VectorXd alpha_;   // R^-1 (y - 1 mu)
  Eigen::VectorXd v_;       // L^-1 1
  double one_rinv_one_ = 1.0;

  void scale_point(const Vec& x, Eigen::VectorXd& out) const;
};

// Duplicate design rows are collapsed keeping the most recent observation;
// fewer than two distinct rows is an input error, and persistent
// factorization failure at the nugget cap is a fit error.
Model fit(const Mat& X, const Vec& y, const Bounds& bounds,
          const GaConfig& cfg, Exec exec = Exec::Parallel);

// Batch kernels (pure maps; Serial is the reference path).
void predict_mean_batch(const Model& model, const Mat& X, Vec& out, Exec exec);
void predict_batch(const Model& model, const Mat& X,
                   std::vector<Prediction>& out, Exec exec);

}  // namespace samo::kriging
