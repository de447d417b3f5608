// SPDX-License-Identifier: Apache-2.0
// Synthetic BEV scenes: deterministic generation, radar-point rasterization
// onto the grid, and the target-continuity sweep used to compare this
// representation against angle-based baselines.
#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rqr3d/codec.hpp"
#include "rqr3d/grid.hpp"

namespace rqr3d {

struct ClassedBox {
  OrientedBox3D box;
  int class_id = 0;
};

struct RadarPoint {
  double x = 0.0;
  double y = 0.0;
  std::vector<double> feature;
};

struct Scene {
  std::string frame_id;
  std::vector<ClassedBox> boxes;
  std::vector<RadarPoint> points;
};

// Mixes a 64-bit value into a well-spread stream seed.
std::uint64_t splitmix64(std::uint64_t x);

// mt19937_64 with explicit double mapping, so streams are identical across
// platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }
  // [0, 1): top 53 bits of the raw draw
  double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * next_unit(); }
  int uniform_int(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 eng_;
};

struct SceneGenParams {
  int box_count = 20;
  double half_extent = 40.0;  // scene spans [-half_extent, half_extent]^2
  double w_min = 0.5, w_max = 3.0;
  double l_min = 0.5, l_max = 8.0;
  double h_min = 0.5, h_max = 3.0;
  double z_min = -1.0, z_max = 1.0;
  int num_classes = 3;
  std::vector<double> class_weights;  // empty = uniform
  double min_separation = 0.0;        // min center distance; 0 disables
  int points_per_box = 0;
  int background_points = 0;
  int feature_dim = 3;
};

// Deterministic for a given seed; every box's encapsulating AABB lies within
// the scene extent.
Scene generate_scene(std::uint64_t seed, const SceneGenParams& params);
std::vector<Scene> generate_scenes(std::uint64_t seed, int frame_count,
                                   const SceneGenParams& params);

struct BevGrid {
  BevGridSpec spec;
  int feature_dim = 0;
  std::vector<std::uint8_t> occupancy;  // flat, row-major
  std::vector<double> features;         // cell_count * feature_dim
  int dropped_count = 0;
};

// Writes each in-range point's feature to its cell in input order; the last
// writer wins. Out-of-range points are dropped and counted.
BevGrid map_points_to_bev(const std::vector<RadarPoint>& points, const BevGridSpec& spec);

// Sweeps theta over (-pi, pi] in steps of at most delta_theta and reports the
// largest adjacent-step jump per regression channel, for this representation
// and for two angle-based baselines (raw theta, sin/cos).
struct ContinuityReport {
  // order: x_min, y_min, x_max, y_max, u, v, d_x, d_y
  std::array<double, 8> target_max_jump{};
  int amin_u_flips = 0;
  int amin_v_flips = 0;
  double theta_raw_max_jump = 0.0;
  double sin_max_jump = 0.0;
  double cos_max_jump = 0.0;
  int steps = 0;
  double step_size = 0.0;
};
inline constexpr std::array<const char*, 8> kContinuityChannelNames = {
    "x_min", "y_min", "x_max", "y_max", "u", "v", "d_x", "d_y"};

ContinuityReport continuity_scan(const OrientedBox3D& box_template, double delta_theta);

}  // namespace rqr3d
