// SPDX-License-Identifier: Apache-2.0
#include "rqr3d/svg.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "rqr3d/codec.hpp"

namespace rqr3d {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

class SvgWriter {
 public:
  SvgWriter(double half_extent, double px_per_m)
      : half_(half_extent), scale_(px_per_m), size_(2.0 * half_extent * px_per_m) {}

  double sx(double x) const { return (x + half_) * scale_; }
  // world y up, SVG y down
  double sy(double y) const { return size_ - (y + half_) * scale_; }

  void line(double x0, double y0, double x1, double y1, const std::string& style) {
    out_ << "  <line x1=\"" << num(sx(x0)) << "\" y1=\"" << num(sy(y0)) << "\" x2=\""
         << num(sx(x1)) << "\" y2=\"" << num(sy(y1)) << "\" " << style << "/>\n";
  }

  void polygon(const std::array<Vec2, 4>& corners, const std::string& style) {
    out_ << "  <polygon points=\"";
    for (size_t i = 0; i < corners.size(); ++i) {
      if (i) out_ << ' ';
      out_ << num(sx(corners[i].x)) << ',' << num(sy(corners[i].y));
    }
    out_ << "\" " << style << "/>\n";
  }

  void circle(double x, double y, double r_px, const std::string& style) {
    out_ << "  <circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\""
         << num(r_px) << "\" " << style << "/>\n";
  }

  std::string finish() {
    std::ostringstream full;
    full << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(size_)
         << "\" height=\"" << num(size_) << "\" viewBox=\"0 0 " << num(size_) << ' '
         << num(size_) << "\">\n"
         << "  <rect width=\"" << num(size_) << "\" height=\"" << num(size_)
         << "\" fill=\"white\"/>\n"
         << out_.str() << "</svg>\n";
    return full.str();
  }

 private:
  std::ostringstream out_;
  double half_, scale_, size_;
};

void draw_box(SvgWriter& w, const OrientedBox3D& box, const std::string& style) {
  const auto corners = corners_bev(box);
  w.polygon(corners, style);
  // heading tick: center to front-edge midpoint
  const Vec2 mid = (corners[0] + corners[1]) * 0.5;
  w.line(box.x_ctr, box.y_ctr, mid.x, mid.y, "stroke=\"black\" stroke-width=\"1\"");
}

}  // namespace

std::string render_scene_svg(const Scene& scene, std::span<const ScoredBox> preds,
                             double half_extent, double pixels_per_meter) {
  if (!(half_extent > 0.0) || !(pixels_per_meter > 0.0)) {
    throw std::invalid_argument("render_scene_svg: extent and scale must be positive");
  }
  SvgWriter w(half_extent, pixels_per_meter);

  const std::string grid_style = "stroke=\"#dddddd\" stroke-width=\"0.5\"";
  const double grid_step = 10.0;
  for (double g = -half_extent; g <= half_extent + 1e-9; g += grid_step) {
    w.line(g, -half_extent, g, half_extent, grid_style);
    w.line(-half_extent, g, half_extent, g, grid_style);
  }

  for (const RadarPoint& p : scene.points) {
    w.circle(p.x, p.y, 1.5, "fill=\"#9999cc\"");
  }
  for (const ClassedBox& cb : scene.boxes) {
    draw_box(w, cb.box, "fill=\"none\" stroke=\"#2266aa\" stroke-width=\"1.5\"");
  }
  for (const ScoredBox& sb : preds) {
    draw_box(w, sb.box,
             "fill=\"none\" stroke=\"#cc6622\" stroke-width=\"1.5\" stroke-dasharray=\"4,3\"");
  }
  return w.finish();
}

}  // namespace rqr3d
