// SPDX-License-Identifier: Apache-2.0
// FCOS-style dense target assignment on the BEV grid: every cell whose
// center falls inside a box's encapsulating AABB becomes foreground for
// that box and carries edge distances, centerness, and the box's keypoint
// targets.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rqr3d/codec.hpp"
#include "rqr3d/grid.hpp"
#include "rqr3d/scene.hpp"

namespace rqr3d {

// Distances from a cell center to the owning AABB's edges; top/left measure
// to the min-coordinate edges (image-style rows), right/bottom to the
// max-coordinate edges. All nonnegative on foreground cells.
struct EdgeDistances {
  double top = 0.0;
  double left = 0.0;
  double right = 0.0;
  double bottom = 0.0;
};

// sqrt(min(l,r)/max(l,r) * min(t,b)/max(t,b)); 1 exactly at the AABB center.
// Throws when all four distances are zero.
double centerness(const EdgeDistances& ltrb);

struct KeypointTargets {
  double u = 0.0;
  double v = 0.0;
  double amin_u = 0.0;
  double amin_v = 0.0;
  double d_x = 0.0;
  double d_y = 0.0;
  double z_ctr = 0.0;
  double h = 0.0;
};

struct CellTarget {
  int class_label = -1;  // -1 = background
  int box_index = -1;    // index into the scene's box list
  EdgeDistances ltrb{};
  double centerness = 0.0;
  KeypointTargets keypoints{};
  std::uint8_t objectness = 0;
};

struct TargetMap {
  BevGridSpec spec;
  std::vector<CellTarget> cells;  // flat, row-major (see BevGridSpec)
  int foreground_count = 0;
  int skipped_boxes = 0;  // boxes whose AABB does not fit in the grid
};

// Boxes whose class appears in size_doubled_classes get w and l scaled by 2
// before anything else (assignment, edge distances, and keypoint targets all
// see the doubled box). On overlaps the box with the smaller AABB area owns
// the cell; ties go to the lower box index.
TargetMap assign_targets(const Scene& scene, const BevGridSpec& grid,
                         std::span<const int> size_doubled_classes = {});
// Single-threaded reference with identical output, kept for testing.
TargetMap assign_targets_serial(const Scene& scene, const BevGridSpec& grid,
                                std::span<const int> size_doubled_classes = {});

// Reassembles full codec targets for a foreground cell (AABB from the cell
// center and edge distances, the rest from the stored keypoints).
Rqr3dTargets cell_to_targets(const BevGridSpec& spec, int ix, int iy,
                             const CellTarget& cell);

}  // namespace rqr3d
