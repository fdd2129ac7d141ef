#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "samo/kriging.hpp"

using namespace samo;
using namespace samo::kriging;

namespace {

struct OracleResult {
  double mu, sigma2, log_likelihood;
};

// Naive dense-inverse evaluation of the analytic estimates, the predictor and
// the uncertainty. Deliberately goes through an explicit matrix inverse so it
// shares nothing with the Cholesky path it checks.
Eigen::MatrixXd oracle_correlation(const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& theta,
                                   double nugget) {
  const int n = static_cast<int>(X.rows());
  Eigen::MatrixXd R(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < X.cols(); ++k) {
        const double d = X(i, k) - X(j, k);
        s += theta(k) * d * d;
      }
      R(i, j) = std::exp(-s);
    }
    R(i, i) += nugget;
  }
  return R;
}

OracleResult likelihood_oracle(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const Eigen::VectorXd& theta, double nugget) {
  const int n = static_cast<int>(X.rows());
  const Eigen::MatrixXd R = oracle_correlation(X, theta, nugget);
  const Eigen::MatrixXd Rinv = R.inverse();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const double mu = ones.dot(Rinv * y) / ones.dot(Rinv * ones);
  const Eigen::VectorXd res = y - mu * ones;
  const double sigma2 = res.dot(Rinv * res) / n;
  const double ll = -0.5 * (n * std::log(sigma2) + std::log(R.determinant()));
  return {mu, sigma2, ll};
}

void predict_oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& theta, double nugget,
                    const Eigen::VectorXd& x, double& mean, double& variance) {
  const int n = static_cast<int>(X.rows());
  const Eigen::MatrixXd R = oracle_correlation(X, theta, nugget);
  const Eigen::MatrixXd Rinv = R.inverse();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const double mu = ones.dot(Rinv * y) / ones.dot(Rinv * ones);
  const Eigen::VectorXd res = y - mu * ones;
  const double sigma2 = res.dot(Rinv * res) / n;
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < X.cols(); ++k) {
      const double d = x(k) - X(i, k);
      s += theta(k) * d * d;
    }
    r(i) = std::exp(-s);
  }
  mean = mu + r.dot(Rinv * res);
  const double t = 1.0 - ones.dot(Rinv * r);
  variance =
      sigma2 * (1.0 - r.dot(Rinv * r) + t * t / ones.dot(Rinv * ones));
}

GaConfig small_ga(std::uint64_t seed) {
  GaConfig cfg;
  cfg.population = 24;
  cfg.generations = 20;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("gaussian correlation basics") {
  CHECK(correlation({0.3, 0.7}, {0.3, 0.7}, {5.0, 2.0}) == 1.0);
  CHECK(correlation({0.1, 0.9}, {0.8, 0.2}, {0.0, 0.0}) == 1.0);
  CHECK(correlation({0.0}, {1.0}, {1.0}) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(correlation({0.0}, {1.0}, {1.0}) ==
        correlation({1.0}, {0.0}, {1.0}));
}

TEST_CASE("log-likelihood closed form for two distant points") {
  Eigen::MatrixXd X(2, 1);
  X << 0.0, 100.0;
  Eigen::VectorXd y(2);
  y << 0.0, 2.0;
  Eigen::VectorXd theta(1);
  theta << 1.0;
  const LikelihoodEval ev = log_likelihood(X, y, theta);
  REQUIRE(ev.factorized);
  CHECK(ev.mu_hat == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ev.sigma2_hat == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ev.value == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("constant outputs make the likelihood undefined") {
  Eigen::MatrixXd X(3, 1);
  X << 0.1, 0.5, 0.9;
  Eigen::VectorXd y = Eigen::VectorXd::Constant(3, 4.2);
  Eigen::VectorXd theta(1);
  theta << 2.0;
  const LikelihoodEval ev = log_likelihood(X, y, theta);
  CHECK(ev.factorized);
  CHECK(ev.value == kLikelihoodUndefined);
  CHECK(ev.sigma2_hat == 0.0);
}

TEST_CASE("log-likelihood matches the dense-inverse oracle") {
  // theta is kept in a range where R stays well-conditioned, so both the
  // Cholesky route and the naive inverse hold the 1e-8 agreement.
  Rng rng = make_rng(314);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_real_distribution<double> logt(-0.5, 2.0);
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::MatrixXd X(6, 2);
    for (int i = 0; i < 6; ++i) {
      for (int k = 0; k < 2; ++k) X(i, k) = uni(rng);
    }
    Eigen::VectorXd y(6);
    for (int i = 0; i < 6; ++i) y(i) = std::sin(5.0 * X(i, 0)) + X(i, 1);
    Eigen::VectorXd theta(2);
    for (int k = 0; k < 2; ++k) theta(k) = std::pow(10.0, logt(rng));

    const LikelihoodEval ev = log_likelihood(X, y, theta);
    REQUIRE(ev.factorized);
    const OracleResult oracle = likelihood_oracle(X, y, theta, ev.nugget);
    CHECK(ev.mu_hat ==
          doctest::Approx(oracle.mu).epsilon(1e-8).scale(1.0));
    CHECK(ev.sigma2_hat ==
          doctest::Approx(oracle.sigma2).epsilon(1e-8).scale(1e-3));
    CHECK(ev.value ==
          doctest::Approx(oracle.log_likelihood).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("predictions match the dense-inverse oracle") {
  Rng rng = make_rng(2718);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const Bounds bounds = Bounds::unit(2);
  for (int rep = 0; rep < 20; ++rep) {
    Mat X(6, Vec(2));
    Vec y(6);
    for (int i = 0; i < 6; ++i) {
      X[i] = {uni(rng), uni(rng)};
      y[i] = std::cos(4.0 * X[i][0]) * (1.0 + X[i][1]);
    }
    GaConfig cfg = small_ga(rep);
    cfg.log10_theta_min = 0.0;  // keeps R well-conditioned for the oracle
    const Model model = fit(X, y, bounds, cfg, Exec::Serial);

    // oracle works on the model's own standardized data and theta
    Eigen::MatrixXd Xe(6, 2);
    Eigen::VectorXd ye(6);
    double mean_y = 0.0;
    for (int i = 0; i < 6; ++i) mean_y += y[i];
    mean_y /= 6.0;
    double var_y = 0.0;
    for (int i = 0; i < 6; ++i) var_y += (y[i] - mean_y) * (y[i] - mean_y);
    const double std_y = std::sqrt(var_y / 6.0);
    for (int i = 0; i < 6; ++i) {
      Xe(i, 0) = X[i][0];
      Xe(i, 1) = X[i][1];
      ye(i) = (y[i] - mean_y) / std_y;
    }
    Eigen::VectorXd theta(2);
    theta << model.theta()[0], model.theta()[1];

    for (int probe = 0; probe < 10; ++probe) {
      const Vec x{uni(rng), uni(rng)};
      Eigen::VectorXd xe(2);
      xe << x[0], x[1];
      double oracle_mean = 0.0, oracle_var = 0.0;
      predict_oracle(Xe, ye, theta, model.nugget(), xe, oracle_mean,
                     oracle_var);
      oracle_mean = mean_y + std_y * oracle_mean;
      oracle_var = std::max(oracle_var, 0.0) * std_y * std_y;
      const Prediction p = model.predict(x);
      const double var_scale =
          model.sigma2_hat() * model.output_std() * model.output_std();
      CHECK(p.mean ==
            doctest::Approx(oracle_mean).epsilon(1e-8).scale(std_y));
      // variance agreement measured on the Eq.-scale sigma2, where the
      // bracket cancellation near training points stays benign
      CHECK(p.variance ==
            doctest::Approx(oracle_var).epsilon(1e-8).scale(var_scale));
    }
  }
}

TEST_CASE("constant training outputs give a flat exact model") {
  const Bounds bounds = Bounds::unit(2);
  Mat X{{0.1, 0.2}, {0.5, 0.9}, {0.8, 0.3}};
  Vec y(3, 3.0);
  const Model model = fit(X, y, bounds, small_ga(0), Exec::Serial);
  CHECK(model.constant());
  for (const Vec& x : Mat{{0.0, 0.0}, {0.42, 0.77}, {1.0, 1.0}}) {
    const Prediction p = model.predict(x);
    CHECK(p.mean == 3.0);
    CHECK(p.variance == 0.0);
  }
}

TEST_CASE("kriging interpolates the training data") {
  Rng rng = make_rng(5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const Bounds bounds = Bounds::unit(3);
  Mat X(12, Vec(3));
  Vec y(12);
  for (int i = 0; i < 12; ++i) {
    X[i] = {uni(rng), uni(rng), uni(rng)};
    y[i] = 10.0 + 5.0 * std::sin(3.0 * X[i][0]) + X[i][1] * X[i][2];
  }
  const Model model = fit(X, y, bounds, small_ga(1), Exec::Serial);
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double range = *hi - *lo;
  const double sigma2_orig =
      model.sigma2_hat() * model.output_std() * model.output_std();
  for (int i = 0; i < 12; ++i) {
    const Prediction p = model.predict(X[i]);
    CHECK(std::abs(p.mean - y[i]) <= 1e-6 * range);
    CHECK(p.variance <= 1e-6 * sigma2_orig);
  }
}

TEST_CASE("variance is nonnegative everywhere") {
  Rng rng = make_rng(6);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const Bounds bounds = Bounds::unit(2);
  Mat X(10, Vec(2));
  Vec y(10);
  for (int i = 0; i < 10; ++i) {
    X[i] = {uni(rng), uni(rng)};
    y[i] = std::exp(X[i][0]) - X[i][1] * X[i][1];
  }
  const Model model = fit(X, y, bounds, small_ga(2), Exec::Serial);
  for (int rep = 0; rep < 1000; ++rep) {
    const Prediction p = model.predict({uni(rng), uni(rng)});
    CHECK(p.variance >= 0.0);
  }
}

TEST_CASE("fitting sin beats the constant-mean predictor leave-one-out") {
  const int n = 8;
  Rng rng = make_rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Mat X(n, Vec(1));
  Vec y(n);
  for (int i = 0; i < n; ++i) {
    X[i][0] = (i + uni(rng)) / n;
    y[i] = std::sin(2.0 * std::numbers::pi * X[i][0]);
  }
  const Bounds bounds = Bounds::unit(1);
  double se_kriging = 0.0, se_constant = 0.0;
  for (int hold = 0; hold < n; ++hold) {
    Mat Xt;
    Vec yt;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == hold) continue;
      Xt.push_back(X[i]);
      yt.push_back(y[i]);
      mean += y[i];
    }
    mean /= n - 1;
    GaConfig cfg = small_ga(100 + hold);
    cfg.population = 30;
    cfg.generations = 30;
    const Model model = fit(Xt, yt, bounds, cfg, Exec::Serial);
    const double err = model.predict(X[hold]).mean - y[hold];
    se_kriging += err * err;
    se_constant += (mean - y[hold]) * (mean - y[hold]);
  }
  CHECK(std::sqrt(se_kriging / n) < std::sqrt(se_constant / n));
}

TEST_CASE("fits are deterministic and affine-consistent") {
  Rng rng = make_rng(8);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const Bounds bounds = Bounds::unit(2);
  Mat X(9, Vec(2));
  Vec y(9);
  for (int i = 0; i < 9; ++i) {
    X[i] = {uni(rng), uni(rng)};
    y[i] = X[i][0] * X[i][0] + 0.3 * std::cos(6.0 * X[i][1]);
  }
  const Model a = fit(X, y, bounds, small_ga(9), Exec::Serial);
  const Model b = fit(X, y, bounds, small_ga(9), Exec::Serial);
  CHECK(a.theta() == b.theta());  // bitwise determinism

  Vec y_affine(9);
  for (int i = 0; i < 9; ++i) y_affine[i] = 2.0 * y[i] + 5.0;
  const Model c = fit(X, y_affine, bounds, small_ga(9), Exec::Serial);
  CHECK(c.theta() == a.theta());  // standardization removes scale
  for (int rep = 0; rep < 20; ++rep) {
    const Vec x{uni(rng), uni(rng)};
    const Prediction pa = a.predict(x);
    const Prediction pc = c.predict(x);
    CHECK(pc.mean == doctest::Approx(2.0 * pa.mean + 5.0).epsilon(1e-10));
    CHECK(pc.variance ==
          doctest::Approx(4.0 * pa.variance).epsilon(1e-10).scale(1e-12));
  }
}

TEST_CASE("duplicate rows collapse to the latest observation") {
  const Bounds bounds = Bounds::unit(1);
  const Mat X{{0.2}, {0.8}, {0.2}};
  const Vec y{1.0, 2.0, 9.0};
  const Model model = fit(X, y, bounds, small_ga(3), Exec::Serial);
  CHECK(model.sample_count() == 2);
  CHECK(model.predict({0.2}).mean == doctest::Approx(9.0).epsilon(1e-5));

  CHECK_THROWS_AS(fit(Mat{{0.5}, {0.5}, {0.5}}, Vec{1.0, 2.0, 3.0}, bounds,
                      small_ga(4), Exec::Serial),
                  std::invalid_argument);
}
