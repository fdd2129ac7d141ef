#include "samo/doe.hpp"

#include <algorithm>
#include <numeric>

namespace samo {

Mat latin_hypercube(int n, int m, Rng& rng) {
  if (n < 1 || m < 1) {
    throw std::invalid_argument("latin_hypercube needs n >= 1 and m >= 1");
  }
  Mat points(n, Vec(m));
  std::vector<int> strata(n);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int col = 0; col < m; ++col) {
    std::iota(strata.begin(), strata.end(), 0);
    std::shuffle(strata.begin(), strata.end(), rng);
    for (int row = 0; row < n; ++row) {
      double v = (strata[row] + uni(rng)) / static_cast<double>(n);
      if (v >= 1.0) v = std::nextafter(1.0, 0.0);
      points[row][col] = v;
    }
  }
  return points;
}

Mat scale_to_bounds(const Mat& unit_points, const Bounds& bounds) {
  Mat out = unit_points;
  for (auto& row : out) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      row[k] = bounds.lower[k] + row[k] * (bounds.upper[k] - bounds.lower[k]);
    }
  }
  return out;
}

}  // namespace samo
