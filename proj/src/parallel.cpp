// SPDX-License-Identifier: Apache-2.0
#include "rqr3d/parallel.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rqr3d {

int thread_budget() {
#ifdef _OPENMP
  if (const char* env = std::getenv("RQR3D_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return std::min(n, 256);
  }
  return std::max(1, omp_get_max_threads());
#else
  return 1;
#endif
}

}  // namespace rqr3d
