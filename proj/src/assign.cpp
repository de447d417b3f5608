// SPDX-License-Identifier: Apache-2.0
#include "rqr3d/assign.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rqr3d/parallel.hpp"

namespace rqr3d {

double centerness(const EdgeDistances& e) {
  const double vals[] = {e.top, e.left, e.right, e.bottom};
  double max_any = 0.0;
  for (double v : vals) {
    if (v < 0.0) throw std::invalid_argument("centerness: negative edge distance");
    max_any = std::max(max_any, v);
  }
  if (max_any == 0.0) throw std::invalid_argument("centerness: degenerate all-zero distances");
  const double lr_max = std::max(e.left, e.right);
  const double tb_max = std::max(e.top, e.bottom);
  if (lr_max == 0.0 || tb_max == 0.0) return 0.0;
  const double lr = std::min(e.left, e.right) / lr_max;
  const double tb = std::min(e.top, e.bottom) / tb_max;
  return std::sqrt(lr * tb);
}

namespace {

struct Candidate {
  OrientedBox3D box;  // after optional size doubling
  Aabb2D aabb;
  Rqr3dTargets targets;
  double aabb_area = 0.0;
  int scene_index = 0;
  int class_id = 0;
};

CellTarget make_cell(const Candidate& c, Vec2 center) {
  CellTarget cell;
  cell.class_label = c.class_id;
  cell.box_index = c.scene_index;
  cell.ltrb = {center.y - c.aabb.y_min, center.x - c.aabb.x_min,
               c.aabb.x_max - center.x, c.aabb.y_max - center.y};
  cell.centerness = centerness(cell.ltrb);
  cell.keypoints = {c.targets.u,   c.targets.v,   c.targets.amin_u, c.targets.amin_v,
                    c.targets.d_x, c.targets.d_y, c.targets.z_ctr,  c.targets.h};
  cell.objectness = 1;
  return cell;
}

template <bool Parallel>
TargetMap assign_impl(const Scene& scene, const BevGridSpec& grid,
                      std::span<const int> size_doubled_classes) {
  validate_grid(grid);
  TargetMap map;
  map.spec = grid;
  map.cells.assign(grid.cell_count(), CellTarget{});

  std::vector<Candidate> cands;
  cands.reserve(scene.boxes.size());
  const double far_x = grid.origin.x + grid.extent();
  const double far_y = grid.origin.y + grid.extent();
  for (size_t i = 0; i < scene.boxes.size(); ++i) {
    Candidate c;
    c.box = scene.boxes[i].box;
    c.class_id = scene.boxes[i].class_id;
    c.scene_index = static_cast<int>(i);
    if (std::find(size_doubled_classes.begin(), size_doubled_classes.end(), c.class_id) !=
        size_doubled_classes.end()) {
      c.box.w *= 2.0;
      c.box.l *= 2.0;
    }
    c.targets = encode(c.box);
    c.aabb = c.targets.aabb;
    c.aabb_area = c.aabb.area();
    if (c.aabb.x_min < grid.origin.x || c.aabb.y_min < grid.origin.y ||
        c.aabb.x_max > far_x || c.aabb.y_max > far_y) {
      ++map.skipped_boxes;
      continue;
    }
    cands.push_back(std::move(c));
  }

  const int n_cells = grid.cell_count();
  const int threads = thread_budget();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (Parallel)
#endif
  for (int idx = 0; idx < n_cells; ++idx) {
    const int ix = idx % grid.cells_per_side;
    const int iy = idx / grid.cells_per_side;
    const Vec2 center = grid.cell_center(ix, iy);
    const Candidate* owner = nullptr;
    for (const Candidate& c : cands) {
      if (!c.aabb.contains(center)) continue;
      // smaller AABB wins the cell; ties go to the earlier box
      if (owner == nullptr || c.aabb_area < owner->aabb_area) owner = &c;
    }
    if (owner != nullptr) map.cells[idx] = make_cell(*owner, center);
  }
  (void)threads;

  for (const CellTarget& cell : map.cells) {
    if (cell.objectness) ++map.foreground_count;
  }
  return map;
}

}  // namespace

TargetMap assign_targets(const Scene& scene, const BevGridSpec& grid,
                         std::span<const int> size_doubled_classes) {
  return assign_impl<true>(scene, grid, size_doubled_classes);
}

TargetMap assign_targets_serial(const Scene& scene, const BevGridSpec& grid,
                                std::span<const int> size_doubled_classes) {
  return assign_impl<false>(scene, grid, size_doubled_classes);
}

Rqr3dTargets cell_to_targets(const BevGridSpec& spec, int ix, int iy,
                             const CellTarget& cell) {
  if (!cell.objectness) {
    throw std::invalid_argument("cell_to_targets: background cell has no targets");
  }
  const Vec2 center = spec.cell_center(ix, iy);
  Rqr3dTargets t;
  t.aabb = {center.x - cell.ltrb.left, center.y - cell.ltrb.top,
            center.x + cell.ltrb.right, center.y + cell.ltrb.bottom};
  t.u = cell.keypoints.u;
  t.v = cell.keypoints.v;
  t.amin_u = cell.keypoints.amin_u;
  t.amin_v = cell.keypoints.amin_v;
  t.d_x = cell.keypoints.d_x;
  t.d_y = cell.keypoints.d_y;
  t.z_ctr = cell.keypoints.z_ctr;
  t.h = cell.keypoints.h;
  return t;
}

}  // namespace rqr3d
