// SPDX-License-Identifier: Apache-2.0
// BEV grid geometry shared by target assignment and point rasterization.
#pragma once

#include <stdexcept>

#include "rqr3d/geometry.hpp"

namespace rqr3d {

struct BevGridSpec {
  int cells_per_side = 0;
  double meters_per_cell = 0.0;
  Vec2 origin{};  // world coordinate of the (0,0) cell corner

  int cell_count() const { return cells_per_side * cells_per_side; }
  double extent() const { return cells_per_side * meters_per_cell; }

  // Cell (ix, iy) covers [origin + i*cell, origin + (i+1)*cell); points on
  // the far boundary are out of range.
  bool in_range(Vec2 p) const {
    const double rx = p.x - origin.x;
    const double ry = p.y - origin.y;
    return rx >= 0.0 && ry >= 0.0 && rx < extent() && ry < extent();
  }
  int cell_ix(double x) const {
    return static_cast<int>(std::floor((x - origin.x) / meters_per_cell));
  }
  int cell_iy(double y) const {
    return static_cast<int>(std::floor((y - origin.y) / meters_per_cell));
  }
  Vec2 cell_center(int ix, int iy) const {
    return {origin.x + (ix + 0.5) * meters_per_cell,
            origin.y + (iy + 0.5) * meters_per_cell};
  }
  int flat_index(int ix, int iy) const { return iy * cells_per_side + ix; }
};

inline void validate_grid(const BevGridSpec& spec) {
  if (spec.cells_per_side <= 0 || !(spec.meters_per_cell > 0.0)) {
    throw std::invalid_argument("grid spec needs positive cell count and cell size");
  }
}

}  // namespace rqr3d
