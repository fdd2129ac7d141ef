#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace samo {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // list of points, row per point

struct Bounds {
  Vec lower;
  Vec upper;

  std::size_t dim() const { return lower.size(); }

  bool contains(const Vec& x, double tol = 0.0) const {
    if (x.size() != lower.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] < lower[k] - tol || x[k] > upper[k] + tol) return false;
    }
    return true;
  }

  void clip(Vec& x) const {
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] < lower[k]) x[k] = lower[k];
      if (x[k] > upper[k]) x[k] = upper[k];
    }
  }

  static Bounds unit(std::size_t m) {
    return Bounds{Vec(m, 0.0), Vec(m, 1.0)};
  }
};

inline double squared_distance(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

inline double norm2(const Vec& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

}  // namespace samo
