// SPDX-License-Identifier: Apache-2.0
#include "rqr3d/batch.hpp"

#include <atomic>
#include <exception>

#include "rqr3d/parallel.hpp"

namespace rqr3d {

namespace {

// Exceptions may not escape an OpenMP region; the first one is captured and
// rethrown after the join.
template <typename Out, typename In, typename Fn>
std::vector<Out> run_batch(std::span<const In> in, bool parallel, Fn&& fn) {
  std::vector<Out> out(in.size());
  const long n = static_cast<long>(in.size());
  const int threads = parallel ? thread_budget() : 1;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (parallel)
#endif
  for (long i = 0; i < n; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      out[i] = fn(in[i]);
    } catch (...) {
      if (!failed.exchange(true)) error = std::current_exception();
    }
  }
  (void)threads;
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace

std::vector<Rqr3dTargets> encode_batch(std::span<const OrientedBox3D> boxes) {
  return run_batch<Rqr3dTargets>(boxes, true, [](const OrientedBox3D& b) { return encode(b); });
}
std::vector<Rqr3dTargets> encode_batch_serial(std::span<const OrientedBox3D> boxes) {
  return run_batch<Rqr3dTargets>(boxes, false, [](const OrientedBox3D& b) { return encode(b); });
}

std::vector<OrientedBox3D> decode_batch(std::span<const Rqr3dTargets> targets) {
  return run_batch<OrientedBox3D>(targets, true, [](const Rqr3dTargets& t) { return decode(t); });
}
std::vector<OrientedBox3D> decode_batch_serial(std::span<const Rqr3dTargets> targets) {
  return run_batch<OrientedBox3D>(targets, false, [](const Rqr3dTargets& t) { return decode(t); });
}

std::vector<CornerSet3D> reconstruct_batch(std::span<const Rqr3dTargets> targets) {
  return run_batch<CornerSet3D>(targets, true,
                                [](const Rqr3dTargets& t) { return reconstruct_corners(t); });
}
std::vector<CornerSet3D> reconstruct_batch_serial(std::span<const Rqr3dTargets> targets) {
  return run_batch<CornerSet3D>(targets, false,
                                [](const Rqr3dTargets& t) { return reconstruct_corners(t); });
}

}  // namespace rqr3d
