#pragma once

#include <cstddef>

namespace samo {

// Data-parallel kernels take an Exec switch. Serial is the reference path the
// equivalence tests and the benchmark harness compare against; both paths
// must produce bitwise-identical results, so parallel loops are pure maps
// into preallocated slots and floating-point reductions happen serially in
// index order afterwards.
enum class Exec { Serial, Parallel };

template <typename Body>
inline void for_each_index(std::size_t n, Exec exec, Body&& body) {
#ifdef _OPENMP
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      body(static_cast<std::size_t>(i));
    }
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace samo
