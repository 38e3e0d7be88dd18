#pragma once

#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lamapf {

inline int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// Runs f(0), ..., f(n-1). threads <= 1 takes the serial reference path;
// otherwise iterations run under OpenMP. Callers guarantee iterations are
// independent (each writes only its own slot), so both paths produce
// identical results.
template <class F>
void parallel_for(int n, int threads, F&& f) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < n; ++i) f(i);
#else
  for (int i = 0; i < n; ++i) f(i);
#endif
}

}  // namespace lamapf
