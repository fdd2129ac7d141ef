#include "samo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace samo {

namespace {

constexpr double kPi = std::numbers::pi;

int problem_index(const std::string& name) {
  if (name.size() == 5 && name.rfind("dtlz", 0) == 0 && name[4] >= '1' &&
      name[4] <= '7') {
    return name[4] - '0';
  }
  return -1;
}

// DTLZ distance function over the last k = m - M + 1 variables.
double g_rastrigin_like(const Vec& x, int M) {
  const int m = static_cast<int>(x.size());
  double g = 0.0;
  for (int i = M - 1; i < m; ++i) {
    const double d = x[i] - 0.5;
    g += d * d - std::cos(20.0 * kPi * d);
  }
  return 100.0 * (static_cast<double>(m - M + 1) + g);
}

double g_sphere(const Vec& x, int M) {
  const int m = static_cast<int>(x.size());
  double g = 0.0;
  for (int i = M - 1; i < m; ++i) {
    const double d = x[i] - 0.5;
    g += d * d;
  }
  return g;
}

Vec dtlz1(const Vec& x, int M) {
  const double g = g_rastrigin_like(x, M);
  Vec f(M);
  for (int i = 0; i < M; ++i) {
    double v = 0.5 * (1.0 + g);
    for (int j = 0; j < M - 1 - i; ++j) v *= x[j];
    if (i > 0) v *= 1.0 - x[M - 1 - i];
    f[i] = v;
  }
  return f;
}

// Shared by DTLZ2-6: product-of-angles mapping from theta in [0, pi/2]^(M-1).
Vec angle_product(const std::vector<double>& theta, double one_plus_g, int M) {
  Vec f(M);
  for (int i = 0; i < M; ++i) {
    double v = one_plus_g;
    for (int j = 0; j < M - 1 - i; ++j) v *= std::cos(theta[j]);
    if (i > 0) v *= std::sin(theta[M - 1 - i]);
    f[i] = v;
  }
  return f;
}

Vec dtlz2(const Vec& x, int M) {
  const double g = g_sphere(x, M);
  std::vector<double> theta(M - 1);
  for (int j = 0; j < M - 1; ++j) theta[j] = x[j] * kPi / 2.0;
  return angle_product(theta, 1.0 + g, M);
}

Vec dtlz3(const Vec& x, int M) {
  const double g = g_rastrigin_like(x, M);
  std::vector<double> theta(M - 1);
  for (int j = 0; j < M - 1; ++j) theta[j] = x[j] * kPi / 2.0;
  return angle_product(theta, 1.0 + g, M);
}

Vec dtlz4(const Vec& x, int M, double alpha = 100.0) {
  const double g = g_sphere(x, M);
  std::vector<double> theta(M - 1);
  for (int j = 0; j < M - 1; ++j) theta[j] = std::pow(x[j], alpha) * kPi / 2.0;
  return angle_product(theta, 1.0 + g, M);
}

std::vector<double> dtlz5_theta(const Vec& x, int M, double g) {
  std::vector<double> theta(M - 1);
  theta[0] = x[0] * kPi / 2.0;
  for (int j = 1; j < M - 1; ++j) {
    theta[j] = kPi / (4.0 * (1.0 + g)) * (1.0 + 2.0 * g * x[j]);
  }
  return theta;
}

Vec dtlz5(const Vec& x, int M) {
  const double g = g_sphere(x, M);
  return angle_product(dtlz5_theta(x, M, g), 1.0 + g, M);
}

Vec dtlz6(const Vec& x, int M) {
  const int m = static_cast<int>(x.size());
  double g = 0.0;
  for (int i = M - 1; i < m; ++i) g += std::pow(x[i], 0.1);
  return angle_product(dtlz5_theta(x, M, g), 1.0 + g, M);
}

double dtlz7_tradeoff(double y) { return y * (1.0 + std::sin(3.0 * kPi * y)); }

Vec dtlz7(const Vec& x, int M) {
  const int m = static_cast<int>(x.size());
  const int k = m - M + 1;
  double s = 0.0;
  for (int i = M - 1; i < m; ++i) s += x[i];
  const double g = 1.0 + 9.0 / static_cast<double>(k) * s;
  Vec f(M);
  double h = static_cast<double>(M);
  for (int j = 0; j < M - 1; ++j) {
    f[j] = x[j];
    h -= f[j] / (1.0 + g) * (1.0 + std::sin(3.0 * kPi * f[j]));
  }
  f[M - 1] = (1.0 + g) * h;
  return f;
}

}  // namespace

ProblemSpec make_problem(const std::string& name, int num_objectives,
                         int num_variables) {
  if (problem_index(name) < 0) {
    throw std::invalid_argument("unknown problem name: " + name);
  }
  if (num_objectives < 2) {
    throw std::invalid_argument("problem needs at least 2 objectives");
  }
  if (num_variables < num_objectives) {
    throw std::invalid_argument(
        "DTLZ needs num_variables >= num_objectives (k = m - M + 1 >= 1)");
  }
  ProblemSpec p;
  p.name = name;
  p.num_objectives = num_objectives;
  p.num_variables = num_variables;
  p.bounds = Bounds::unit(static_cast<std::size_t>(num_variables));
  return p;
}

Vec evaluate(const ProblemSpec& problem, const Vec& x) {
  if (static_cast<int>(x.size()) != problem.num_variables ||
      !problem.bounds.contains(x)) {
    throw std::invalid_argument("design point outside problem bounds");
  }
  const int M = problem.num_objectives;
  switch (problem_index(problem.name)) {
    case 1: return dtlz1(x, M);
    case 2: return dtlz2(x, M);
    case 3: return dtlz3(x, M);
    case 4: return dtlz4(x, M);
    case 5: return dtlz5(x, M);
    case 6: return dtlz6(x, M);
    case 7: return dtlz7(x, M);
    default: throw std::invalid_argument("unknown problem: " + problem.name);
  }
}

const std::vector<std::pair<double, double>>& dtlz7_optimal_intervals() {
  static const std::vector<std::pair<double, double>> intervals = [] {
    // Strict running-max set of y -> y*(1+sin(3*pi*y)) on [0,1]: coarse grid
    // membership first, then bisection refinement of the interval ends.
    const int grid = 200000;
    std::vector<std::pair<double, double>> out;
    double run_max = -1.0;
    bool in_run = false;
    double run_start = 0.0;
    double prev_y = 0.0;
    for (int i = 0; i <= grid; ++i) {
      const double y = static_cast<double>(i) / grid;
      const double u = dtlz7_tradeoff(y);
      const bool member = u > run_max;
      if (member && !in_run) {
        run_start = y;
        in_run = true;
      }
      if (!member && in_run) {
        out.emplace_back(run_start, prev_y);
        in_run = false;
      }
      if (member) run_max = u;
      prev_y = y;
    }
    if (in_run) out.emplace_back(run_start, 1.0);

    // Refine: left ends solve u(y) = previous peak on a rising stretch, right
    // ends are local maxima of u.
    std::vector<std::pair<double, double>> refined;
    double prev_peak = -1.0;
    for (auto [lo, hi] : out) {
      if (lo > 0.0 && prev_peak > 0.0) {
        double a = lo - 2.0 / grid, b = lo;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (a + b);
          if (dtlz7_tradeoff(mid) > prev_peak) b = mid; else a = mid;
        }
        lo = b;
      }
      if (hi < 1.0) {
        double a = hi - 2.0 / grid, b = hi + 2.0 / grid;
        for (int it = 0; it < 200; ++it) {
          const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
          if (dtlz7_tradeoff(m1) < dtlz7_tradeoff(m2)) a = m1; else b = m2;
        }
        hi = 0.5 * (a + b);
      }
      prev_peak = dtlz7_tradeoff(hi);
      refined.emplace_back(lo, hi);
    }
    return refined;
  }();
  return intervals;
}

namespace {

bool in_dtlz7_optimal_set(double y) {
  for (const auto& [lo, hi] : dtlz7_optimal_intervals()) {
    if (y >= lo && y <= hi) return true;
  }
  return false;
}

Mat sample_pf_dtlz1(int M, int count, Rng& rng) {
  std::uniform_real_distribution<double> uni(std::numeric_limits<double>::min(), 1.0);
  Mat out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec f(M);
    double s = 0.0;
    for (int k = 0; k < M; ++k) {
      f[k] = -std::log(uni(rng));
      s += f[k];
    }
    for (int k = 0; k < M; ++k) f[k] *= 0.5 / s;
    out.push_back(std::move(f));
  }
  return out;
}

Mat sample_pf_dtlz2(int M, int count, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec f(M);
    double s = 0.0;
    for (int k = 0; k < M; ++k) {
      f[k] = std::abs(normal(rng));
      s += f[k] * f[k];
    }
    s = std::sqrt(s);
    if (s == 0.0) {
      --i;
      continue;
    }
    for (int k = 0; k < M; ++k) f[k] /= s;
    out.push_back(std::move(f));
  }
  return out;
}

Mat sample_pf_dtlz5(int M, int count, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.0, kPi / 2.0);
  Mat out;
  out.reserve(count);
  std::vector<double> theta(M - 1, kPi / 4.0);
  for (int i = 0; i < count; ++i) {
    theta[0] = uni(rng);
    out.push_back(angle_product(theta, 1.0, M));
  }
  return out;
}

Mat sample_pf_dtlz7(int M, int count, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Mat out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec f(M);
    for (int j = 0; j < M - 1; ++j) {
      double y;
      do {
        y = uni(rng);
      } while (!in_dtlz7_optimal_set(y));
      f[j] = y;
    }
    double h = static_cast<double>(M);
    for (int j = 0; j < M - 1; ++j) {
      h -= f[j] / 2.0 * (1.0 + std::sin(3.0 * kPi * f[j]));
    }
    f[M - 1] = 2.0 * h;  // g = 1 on the front
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

Mat sample_true_pf(const ProblemSpec& problem, int count, Rng& rng) {
  if (count <= 0) throw std::invalid_argument("count must be positive");
  const int M = problem.num_objectives;
  switch (problem_index(problem.name)) {
    case 1: return sample_pf_dtlz1(M, count, rng);
    case 2: return sample_pf_dtlz2(M, count, rng);
    case 5: return sample_pf_dtlz5(M, count, rng);
    case 7: return sample_pf_dtlz7(M, count, rng);
    default:
      throw std::runtime_error("no analytic Pareto-front sampler for " +
                               problem.name);
  }
}

}  // namespace samo
