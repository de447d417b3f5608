// SPDX-License-Identifier: Apache-2.0
#include "rqr3d/codec.hpp"

#include <cmath>
#include <stdexcept>

namespace rqr3d {

namespace {

bool targets_finite(const Rqr3dTargets& t) {
  const double fields[] = {t.aabb.x_min, t.aabb.y_min, t.aabb.x_max, t.aabb.y_max,
                           t.u,          t.v,          t.amin_u,     t.amin_v,
                           t.d_x,        t.d_y,        t.z_ctr,      t.h};
  for (double f : fields) {
    if (!std::isfinite(f)) return false;
  }
  return true;
}

bool axis_aligned(const Rqr3dTargets& t) {
  return t.u < kAxisAlignedTol && t.v < kAxisAlignedTol;
}

}  // namespace

Rqr3dTargets encode(const OrientedBox3D& box) {
  validate_box(box);
  const auto corners = corners_bev(box);
  Rqr3dTargets t;
  t.aabb = aabb_of(corners);
  t.z_ctr = box.z_ctr;
  t.h = box.h;

  // Vertex with the smallest y touches the AABB's bottom edge; ties keep the
  // lowest index so exactly axis-aligned boxes stay deterministic.
  int bottom = 0, right = 0;
  for (int i = 1; i < 4; ++i) {
    if (corners[i].y < corners[bottom].y) bottom = i;
    if (corners[i].x > corners[right].x) right = i;
  }
  const double from_min_x = corners[bottom].x - t.aabb.x_min;
  const double from_max_x = t.aabb.x_max - corners[bottom].x;
  t.u = std::min(from_min_x, from_max_x);
  t.amin_u = (from_min_x <= from_max_x) ? 0.0 : 1.0;

  const double from_min_y = corners[right].y - t.aabb.y_min;
  const double from_max_y = t.aabb.y_max - corners[right].y;
  t.v = std::min(from_min_y, from_max_y);
  t.amin_v = (from_min_y <= from_max_y) ? 0.0 : 1.0;

  const Vec2 front_mid = (corners[0] + corners[1]) * 0.5;
  t.d_x = front_mid.x - box.x_ctr;
  t.d_y = front_mid.y - box.y_ctr;
  return t;
}

LocalOffsets reassign_offsets(const Rqr3dTargets& t) {
  LocalOffsets o;
  o.u = (t.amin_u >= 0.5) ? t.aabb.width() - t.u : t.u;
  o.v = (t.amin_v >= 0.5) ? t.aabb.height() - t.v : t.v;
  return o;
}

OrientedBox3D decode(const Rqr3dTargets& t) {
  if (!targets_finite(t)) throw std::invalid_argument("decode: non-finite targets");
  const double W = t.aabb.width();
  const double H = t.aabb.height();
  OrientedBox3D box;
  const Vec2 ctr = t.aabb.center();
  box.x_ctr = ctr.x;
  box.y_ctr = ctr.y;
  box.z_ctr = t.z_ctr;
  box.h = t.h;
  box.theta = std::atan2(t.d_y, t.d_x);

  if (axis_aligned(t)) {
    // Selector bits are meaningless here; pick the side split by the
    // dominant component of the front-edge offset.
    if (std::fabs(t.d_x) >= std::fabs(t.d_y)) {
      box.l = W;
      box.w = H;
    } else {
      box.l = H;
      box.w = W;
    }
  } else {
    const auto off = reassign_offsets(t);
    const double e1 = std::sqrt(off.u * off.u + (H - off.v) * (H - off.v));
    const double e2 = std::sqrt((W - off.u) * (W - off.u) + off.v * off.v);
    const bool same_sign = (t.d_x >= 0.0 && t.d_y >= 0.0) || (t.d_x < 0.0 && t.d_y < 0.0);
    if (same_sign) {
      box.w = e1;
      box.l = e2;
    } else {
      box.w = e2;
      box.l = e1;
    }
  }
  if (!(box.w > 0.0) || !(box.l > 0.0) || !(box.h > 0.0)) {
    throw std::invalid_argument("decode: recovered edge lengths are non-positive");
  }
  return box;
}

CornerSet3D reconstruct_corners(const Rqr3dTargets& t) {
  if (!targets_finite(t)) {
    throw std::invalid_argument("reconstruct_corners: non-finite targets");
  }
  CornerSet3D cs;
  cs.z_bottom = t.z_ctr - 0.5 * t.h;
  cs.z_top = t.z_ctr + 0.5 * t.h;

  const double x0 = t.aabb.x_min;
  const double y0 = t.aabb.y_min;
  const double W = t.aabb.width();
  const double H = t.aabb.height();
  auto at = [&](double lx, double ly) { return Vec2{x0 + lx, y0 + ly}; };

  if (axis_aligned(t)) {
    // The four AABB corners are the box corners; orient the front edge along
    // the dominant component of d.
    if (std::fabs(t.d_x) >= std::fabs(t.d_y)) {
      const double fx = (t.d_x >= 0.0) ? W : 0.0;
      const double rx = W - fx;
      cs.bottom = {at(fx, H), at(fx, 0), at(rx, 0), at(rx, H)};
    } else {
      const double fy = (t.d_y >= 0.0) ? H : 0.0;
      const double ry = H - fy;
      cs.bottom = {at(0, fy), at(W, fy), at(W, ry), at(0, ry)};
    }
    return cs;
  }

  const auto off = reassign_offsets(t);
  const double u = off.u;
  const double v = off.v;
  // One sign case per quadrant of d; each lists the corner touching the
  // right, top, left and bottom edge of the AABB, starting from the corner
  // the front edge leads with.
  if (t.d_x >= 0.0 && t.d_y >= 0.0) {
    cs.bottom = {at(W, v), at(W - u, H), at(0, H - v), at(u, 0)};
  } else if (t.d_x >= 0.0 && t.d_y < 0.0) {
    cs.bottom = {at(u, 0), at(W, v), at(W - u, H), at(0, H - v)};
  } else if (t.d_x < 0.0 && t.d_y >= 0.0) {
    cs.bottom = {at(W - u, H), at(0, H - v), at(u, 0), at(W, v)};
  } else {
    cs.bottom = {at(0, H - v), at(u, 0), at(W, v), at(W - u, H)};
  }
  return cs;
}

OrientedBox3D canonicalize_wl(const OrientedBox3D& box) {
  validate_box(box);
  OrientedBox3D out = box;
  out.theta = wrap_angle(box.theta);
  if (out.w > out.l) {
    std::swap(out.w, out.l);
    out.theta = wrap_angle(out.theta + 0.5 * kPi);
  }
  return out;
}

}  // namespace rqr3d
