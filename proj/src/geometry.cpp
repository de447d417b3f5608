// SPDX-License-Identifier: Apache-2.0
#include "rqr3d/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace rqr3d {

bool box_is_valid(const OrientedBox3D& b) {
  const double fields[] = {b.x_ctr, b.y_ctr, b.z_ctr, b.w, b.l, b.h, b.theta};
  for (double f : fields) {
    if (!std::isfinite(f)) return false;
  }
  return b.w > 0.0 && b.l > 0.0 && b.h > 0.0;
}

void validate_box(const OrientedBox3D& b) {
  if (!box_is_valid(b)) {
    throw std::invalid_argument("oriented box has non-finite fields or non-positive sizes");
  }
}

std::array<Vec2, 4> corners_bev(const OrientedBox3D& b) {
  const double c = std::cos(b.theta);
  const double s = std::sin(b.theta);
  const double hl = 0.5 * b.l;
  const double hw = 0.5 * b.w;
  // Local corner offsets (length axis first), rotated into the world frame.
  const Vec2 local[4] = {{hl, hw}, {hl, -hw}, {-hl, -hw}, {-hl, hw}};
  std::array<Vec2, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[i] = {b.x_ctr + c * local[i].x - s * local[i].y,
              b.y_ctr + s * local[i].x + c * local[i].y};
  }
  return out;
}

CornerSet3D corners_3d(const OrientedBox3D& b) {
  CornerSet3D cs;
  cs.bottom = corners_bev(b);
  cs.z_bottom = b.z_ctr - 0.5 * b.h;
  cs.z_top = b.z_ctr + 0.5 * b.h;
  return cs;
}

ConvexPolygon2D footprint_polygon(const OrientedBox3D& b) {
  const auto c = corners_bev(b);
  return ConvexPolygon2D{{c[0], c[3], c[2], c[1]}};
}

Aabb2D aabb_of(std::span<const Vec2> pts) {
  if (pts.empty()) throw std::invalid_argument("aabb_of: empty point set");
  Aabb2D box{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const Vec2& p : pts) {
    box.x_min = std::min(box.x_min, p.x);
    box.y_min = std::min(box.y_min, p.y);
    box.x_max = std::max(box.x_max, p.x);
    box.y_max = std::max(box.y_max, p.y);
  }
  return box;
}

double wrap_angle(double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("wrap_angle: non-finite angle");
  double r = std::remainder(a, 2.0 * kPi);  // lands in [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

}  // namespace rqr3d
