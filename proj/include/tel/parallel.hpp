#ifndef TEL_PARALLEL_HPP
#define TEL_PARALLEL_HPP

#include <cstddef>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tel {

/// True unless TEL_LAB_THREADS=1 pins execution to the serial path.
inline bool parallel_enabled() {
  const char* env = std::getenv("TEL_LAB_THREADS");
  return !(env && env[0] == '1' && env[1] == '\0');
}

/// Runs f(i) for i in [0, n). Iterations must be independent: each
/// replica owns its state and its seed, so scheduling order cannot
/// change results. Falls back to a plain loop without OpenMP.
template <typename F>
void parallel_for(std::size_t n, F&& f, bool force_serial = false) {
#ifdef _OPENMP
  if (!force_serial && parallel_enabled()) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      f(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)force_serial;
#endif
  for (std::size_t i = 0; i < n; ++i) f(i);
}

}  // namespace tel

#endif  // TEL_PARALLEL_HPP
