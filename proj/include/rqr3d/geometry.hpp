// SPDX-License-Identifier: Apache-2.0
// Planar box geometry shared by the whole library: oriented boxes in
// bird's-eye view (x-y plane, z up), axis-aligned bounds, angle wrapping.
#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace rqr3d {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Oriented box on the ground plane plus a vertical extent.
// theta is the heading of the length axis, CCW from +x, in (-pi, pi].
// w is the lateral size, l the longitudinal size, h the height.
struct OrientedBox3D {
  double x_ctr = 0.0;
  double y_ctr = 0.0;
  double z_ctr = 0.0;
  double w = 1.0;
  double l = 1.0;
  double h = 1.0;
  double theta = 0.0;
};

bool box_is_valid(const OrientedBox3D& b);
// Throws std::invalid_argument when sizes are non-positive or any field is
// non-finite.
void validate_box(const OrientedBox3D& b);

struct Aabb2D {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  Vec2 center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
  bool contains(Vec2 p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

// Bottom-face corners V1..V4 plus the z range. V1V2 is the front edge
// (the edge crossed by the heading direction), V3V4 the rear edge.
struct CornerSet3D {
  std::array<Vec2, 4> bottom{};
  double z_bottom = 0.0;
  double z_top = 0.0;
};

// CCW ring of vertices; empty means empty region.
struct ConvexPolygon2D {
  std::vector<Vec2> vertices;
};

// BEV corners in the fixed order front-left, front-right, rear-right,
// rear-left (clockwise when x points right and y up).
std::array<Vec2, 4> corners_bev(const OrientedBox3D& b);
CornerSet3D corners_3d(const OrientedBox3D& b);

// Box footprint as a CCW polygon (corners_bev reversed).
ConvexPolygon2D footprint_polygon(const OrientedBox3D& b);

Aabb2D aabb_of(std::span<const Vec2> pts);
inline Aabb2D aabb_of(const std::array<Vec2, 4>& pts) {
  return aabb_of(std::span<const Vec2>(pts.data(), pts.size()));
}

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace rqr3d
