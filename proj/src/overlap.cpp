// SPDX-License-Identifier: Apache-2.0
#include "rqr3d/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rqr3d {

namespace {

constexpr double kMergeTol = 1e-12;

// Drops consecutive duplicate vertices (within kMergeTol per axis).
ConvexPolygon2D dedup(const ConvexPolygon2D& poly) {
  ConvexPolygon2D out;
  const size_t n = poly.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = poly.vertices[i];
    const Vec2& q = poly.vertices[(i + 1) % n];
    if (std::fabs(p.x - q.x) > kMergeTol || std::fabs(p.y - q.y) > kMergeTol) {
      out.vertices.push_back(p);
    }
  }
  return out;
}

ConvexPolygon2D empty_if_degenerate(ConvexPolygon2D poly) {
  if (poly.vertices.size() < 3 || polygon_area(poly) < kDegenerateAreaTol) {
    poly.vertices.clear();
  }
  return poly;
}

}  // namespace

double polygon_area(const ConvexPolygon2D& poly) {
  const size_t n = poly.vertices.size();
  if (n < 3) return 0.0;
  double acc = 0.0;  // shoelace
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = poly.vertices[i];
    const Vec2& q = poly.vertices[(i + 1) % n];
    acc += cross(p, q);
  }
  return 0.5 * std::fabs(acc);
}

ConvexPolygon2D clip_convex(const ConvexPolygon2D& subject, const ConvexPolygon2D& clip) {
  if (subject.vertices.size() < 3 || clip.vertices.size() < 3) return {};
  ConvexPolygon2D out = subject;
  const size_t m = clip.vertices.size();
  for (size_t e = 0; e < m && !out.vertices.empty(); ++e) {
    const Vec2 a = clip.vertices[e];
    const Vec2 b = clip.vertices[(e + 1) % m];
    const ConvexPolygon2D in = out;
    out.vertices.clear();
    const size_t n = in.vertices.size();
    for (size_t i = 0; i < n; ++i) {
      const Vec2 p = in.vertices[i];
      const Vec2 q = in.vertices[(i + 1) % n];
      // For a CCW clip ring, inside is the left side of edge a->b.
      const double sp = cross(b - a, p - a);
      const double sq = cross(b - a, q - a);
      if (sp >= 0.0) out.vertices.push_back(p);
      if ((sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0)) {
        const double tt = sp / (sp - sq);
        out.vertices.push_back(p + (q - p) * tt);
      }
    }
  }
  return empty_if_degenerate(dedup(out));
}

ConvexPolygon2D convex_hull(std::span<const Vec2> pts) {
  std::vector<Vec2> p(pts.begin(), pts.end());
  std::sort(p.begin(), p.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  p.erase(std::unique(p.begin(), p.end(),
                      [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
          p.end());
  const size_t n = p.size();
  if (n < 3) return ConvexPolygon2D{p};
  // Monotone chain; collinear points on the hull boundary are dropped.
  std::vector<Vec2> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p[i];
  }
  const size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p[i];
  }
  hull.resize(k - 1);
  return ConvexPolygon2D{std::move(hull)};
}

OverlapResult iou_aabb(const Aabb2D& a, const Aabb2D& b) {
  OverlapResult r;
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  r.intersection = std::max(0.0, iw) * std::max(0.0, ih);
  r.union_area = a.area() + b.area() - r.intersection;
  r.iou = (r.union_area > 0.0) ? r.intersection / r.union_area : 0.0;
  const double hx_min = std::min(a.x_min, b.x_min);
  const double hy_min = std::min(a.y_min, b.y_min);
  const double hx_max = std::max(a.x_max, b.x_max);
  const double hy_max = std::max(a.y_max, b.y_max);
  const double hull = (hx_max - hx_min) * (hy_max - hy_min);
  r.giou = (hull > 0.0) ? r.iou - (hull - r.union_area) / hull : r.iou;
  return r;
}

OverlapResult iou_rotated_bev(const OrientedBox3D& a, const OrientedBox3D& b) {
  validate_box(a);
  validate_box(b);
  OverlapResult r;
  const ConvexPolygon2D pa = footprint_polygon(a);
  const ConvexPolygon2D pb = footprint_polygon(b);
  r.intersection = polygon_area(clip_convex(pa, pb));
  const double area_a = a.w * a.l;
  const double area_b = b.w * b.l;
  r.union_area = area_a + area_b - r.intersection;
  r.iou = r.intersection / r.union_area;

  std::vector<Vec2> all(pa.vertices);
  all.insert(all.end(), pb.vertices.begin(), pb.vertices.end());
  const double hull = polygon_area(convex_hull(all));
  r.giou = (hull > 0.0) ? r.iou - (hull - r.union_area) / hull : r.iou;
  return r;
}

double iou_3d(const OrientedBox3D& a, const OrientedBox3D& b) {
  const OverlapResult bev = iou_rotated_bev(a, b);
  const double za0 = a.z_ctr - 0.5 * a.h, za1 = a.z_ctr + 0.5 * a.h;
  const double zb0 = b.z_ctr - 0.5 * b.h, zb1 = b.z_ctr + 0.5 * b.h;
  const double zi = std::max(0.0, std::min(za1, zb1) - std::max(za0, zb0));
  const double inter = bev.intersection * zi;
  const double vol = a.w * a.l * a.h + b.w * b.l * b.h - inter;
  return inter / vol;
}

}  // namespace rqr3d
