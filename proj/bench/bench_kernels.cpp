// SPDX-License-Identifier: Apache-2.0
// Compares the serial reference kernels against their OpenMP versions on
// identical inputs and checks that outputs agree bit for bit. Wall times are
// informational; the agreement column is the part that must hold.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rqr3d/assign.hpp"
#include "rqr3d/batch.hpp"
#include "rqr3d/parallel.hpp"
#include "rqr3d/scene.hpp"

using namespace rqr3d;

namespace {

double now_s() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return 0.0;
#endif
}

template <typename Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_s();
    fn();
    best = std::min(best, now_s() - t0);
  }
  return best * 1e3;
}

void report(const char* name, size_t n, double serial_ms, double parallel_ms,
            bool identical) {
  std::printf("%-22s n=%-8zu serial %8.2f ms   parallel %8.2f ms   speedup %5.2fx   %s\n",
              name, n, serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
              identical ? "bit-identical" : "MISMATCH");
}

bool same_bits(const void* a, const void* b, size_t bytes) {
  return std::memcmp(a, b, bytes) == 0;
}

}  // namespace

int main() {
  std::printf("thread budget: %d\n", thread_budget());
  const int reps = 3;

  // batch codec kernels
  const size_t n = 400000;
  std::vector<OrientedBox3D> boxes(n);
  Rng rng(42);
  for (OrientedBox3D& b : boxes) {
    b.x_ctr = rng.uniform(-50, 50);
    b.y_ctr = rng.uniform(-50, 50);
    b.z_ctr = rng.uniform(-2, 2);
    b.w = rng.uniform(0.3, 20.0);
    b.l = rng.uniform(0.3, 20.0);
    b.h = rng.uniform(0.3, 5.0);
    b.theta = rng.uniform(-kPi, kPi);
  }

  std::vector<Rqr3dTargets> enc_s, enc_p;
  const double enc_serial = time_best_of(reps, [&] { enc_s = encode_batch_serial(boxes); });
  const double enc_par = time_best_of(reps, [&] { enc_p = encode_batch(boxes); });
  report("encode_batch", n, enc_serial, enc_par,
         same_bits(enc_s.data(), enc_p.data(), n * sizeof(Rqr3dTargets)));

  std::vector<OrientedBox3D> dec_s, dec_p;
  const double dec_serial = time_best_of(reps, [&] { dec_s = decode_batch_serial(enc_s); });
  const double dec_par = time_best_of(reps, [&] { dec_p = decode_batch(enc_s); });
  report("decode_batch", n, dec_serial, dec_par,
         same_bits(dec_s.data(), dec_p.data(), n * sizeof(OrientedBox3D)));

  std::vector<CornerSet3D> rec_s, rec_p;
  const double rec_serial =
      time_best_of(reps, [&] { rec_s = reconstruct_batch_serial(enc_s); });
  const double rec_par = time_best_of(reps, [&] { rec_p = reconstruct_batch(enc_s); });
  report("reconstruct_batch", n, rec_serial, rec_par,
         same_bits(rec_s.data(), rec_p.data(), n * sizeof(CornerSet3D)));

  // dense target assignment
  SceneGenParams params;
  params.box_count = 60;
  params.half_extent = 40.0;
  const Scene scene = generate_scene(7, params);
  BevGridSpec grid{512, 80.0 / 512, {-40.0, -40.0}};

  TargetMap map_s, map_p;
  const double asg_serial =
      time_best_of(reps, [&] { map_s = assign_targets_serial(scene, grid); });
  const double asg_par = time_best_of(reps, [&] { map_p = assign_targets(scene, grid); });
  bool cells_equal = map_s.foreground_count == map_p.foreground_count &&
                     map_s.cells.size() == map_p.cells.size();
  for (size_t i = 0; cells_equal && i < map_s.cells.size(); ++i) {
    const CellTarget& x = map_s.cells[i];
    const CellTarget& y = map_p.cells[i];
    cells_equal = x.class_label == y.class_label && x.box_index == y.box_index &&
                  x.objectness == y.objectness && x.centerness == y.centerness &&
                  same_bits(&x.ltrb, &y.ltrb, sizeof(EdgeDistances)) &&
                  same_bits(&x.keypoints, &y.keypoints, sizeof(KeypointTargets));
  }
  report("assign_targets", static_cast<size_t>(grid.cell_count()), asg_serial, asg_par,
         cells_equal);

  // continuity sweep (internally parallel; timed at the configured budget)
  OrientedBox3D tpl;
  tpl.w = 2.0;
  tpl.l = 4.0;
  ContinuityReport cont;
  const double cont_ms = time_best_of(reps, [&] { cont = continuity_scan(tpl, 1e-4); });
  std::printf("%-22s n=%-8d swept in %8.2f ms (budget %d threads)\n", "continuity_scan",
              cont.steps, cont_ms, thread_budget());
  return 0;
}
