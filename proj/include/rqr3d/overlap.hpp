// SPDX-License-Identifier: Apache-2.0
// Exact overlap measures between boxes: axis-aligned IoU, rotated BEV IoU
// via convex polygon clipping, 3D IoU, and generalized IoU.
#pragma once

#include "rqr3d/geometry.hpp"

namespace rqr3d {

struct OverlapResult {
  double intersection = 0.0;
  double union_area = 0.0;
  double iou = 0.0;
  double giou = 0.0;
};

// Polygons with area below this are collapsed to empty, and vertices closer
// than this are merged during clipping.
inline constexpr double kDegenerateAreaTol = 1e-12;

double polygon_area(const ConvexPolygon2D& poly);
ConvexPolygon2D clip_convex(const ConvexPolygon2D& subject, const ConvexPolygon2D& clip);
ConvexPolygon2D convex_hull(std::span<const Vec2> pts);

OverlapResult iou_aabb(const Aabb2D& a, const Aabb2D& b);
OverlapResult iou_rotated_bev(const OrientedBox3D& a, const OrientedBox3D& b);
double iou_3d(const OrientedBox3D& a, const OrientedBox3D& b);

}  // namespace rqr3d
