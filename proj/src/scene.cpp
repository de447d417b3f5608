// SPDX-License-Identifier: Apache-2.0
#include "rqr3d/scene.hpp"

#include <cmath>
#include <stdexcept>

#include "rqr3d/parallel.hpp"

namespace rqr3d {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

void validate_params(const SceneGenParams& p) {
  if (p.box_count < 0 || p.half_extent <= 0.0 || p.num_classes <= 0 ||
      p.w_min <= 0.0 || p.w_max < p.w_min || p.l_min <= 0.0 || p.l_max < p.l_min ||
      p.h_min <= 0.0 || p.h_max < p.h_min || p.z_max < p.z_min ||
      p.min_separation < 0.0 || p.points_per_box < 0 || p.background_points < 0 ||
      p.feature_dim < 1) {
    throw std::invalid_argument("generate_scene: invalid parameter ranges");
  }
  if (!p.class_weights.empty()) {
    if (p.class_weights.size() != static_cast<size_t>(p.num_classes)) {
      throw std::invalid_argument("generate_scene: class_weights size mismatch");
    }
    double total = 0.0;
    for (double w : p.class_weights) {
      if (w < 0.0) throw std::invalid_argument("generate_scene: negative class weight");
      total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("generate_scene: zero class weights");
  }
}

int sample_class(Rng& rng, const SceneGenParams& p) {
  if (p.class_weights.empty()) return rng.uniform_int(p.num_classes);
  double total = 0.0;
  for (double w : p.class_weights) total += w;
  double r = rng.uniform(0.0, total);
  for (int c = 0; c < p.num_classes; ++c) {
    r -= p.class_weights[c];
    if (r < 0.0) return c;
  }
  return p.num_classes - 1;
}

std::vector<double> sample_feature(Rng& rng, int dim) {
  std::vector<double> f(dim);
  for (double& x : f) x = rng.next_unit();
  return f;
}

}  // namespace

Scene generate_scene(std::uint64_t seed, const SceneGenParams& p) {
  validate_params(p);
  Rng rng(seed);
  Scene scene;
  scene.frame_id = "frame_" + std::to_string(seed);

  constexpr int kMaxAttempts = 200;
  for (int b = 0; b < p.box_count; ++b) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      OrientedBox3D box;
      box.w = rng.uniform(p.w_min, p.w_max);
      box.l = rng.uniform(p.l_min, p.l_max);
      box.h = rng.uniform(p.h_min, p.h_max);
      box.x_ctr = rng.uniform(-p.half_extent, p.half_extent);
      box.y_ctr = rng.uniform(-p.half_extent, p.half_extent);
      box.z_ctr = rng.uniform(p.z_min, p.z_max);
      box.theta = wrap_angle(rng.uniform(-kPi, kPi));
      const int cls = sample_class(rng, p);

      const Aabb2D aabb = aabb_of(corners_bev(box));
      if (aabb.x_min < -p.half_extent || aabb.x_max > p.half_extent ||
          aabb.y_min < -p.half_extent || aabb.y_max > p.half_extent) {
        continue;
      }
      if (p.min_separation > 0.0) {
        bool too_close = false;
        for (const ClassedBox& other : scene.boxes) {
          const double dx = other.box.x_ctr - box.x_ctr;
          const double dy = other.box.y_ctr - box.y_ctr;
          if (std::hypot(dx, dy) < p.min_separation) {
            too_close = true;
            break;
          }
        }
        if (too_close) continue;
      }
      scene.boxes.push_back({box, cls});
      placed = true;
    }
    if (!placed) {
      throw std::runtime_error("generate_scene: could not place box under constraints");
    }
  }

  for (const ClassedBox& cb : scene.boxes) {
    for (int k = 0; k < p.points_per_box; ++k) {
      RadarPoint pt;
      pt.x = cb.box.x_ctr + rng.uniform(-0.5 * cb.box.l, 0.5 * cb.box.l);
      pt.y = cb.box.y_ctr + rng.uniform(-0.5 * cb.box.w, 0.5 * cb.box.w);
      pt.feature = sample_feature(rng, p.feature_dim);
      scene.points.push_back(std::move(pt));
    }
  }
  for (int k = 0; k < p.background_points; ++k) {
    RadarPoint pt;
    pt.x = rng.uniform(-p.half_extent, p.half_extent);
    pt.y = rng.uniform(-p.half_extent, p.half_extent);
    pt.feature = sample_feature(rng, p.feature_dim);
    scene.points.push_back(std::move(pt));
  }
  return scene;
}

std::vector<Scene> generate_scenes(std::uint64_t seed, int frame_count,
                                   const SceneGenParams& p) {
  if (frame_count < 0) throw std::invalid_argument("generate_scenes: negative count");
  std::vector<Scene> scenes(frame_count);
  const int threads = thread_budget();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (int i = 0; i < frame_count; ++i) {
    // Per-frame seeds are derived, not sequential, so frames stay independent
    // and the result does not depend on the parallel schedule.
    scenes[i] = generate_scene(splitmix64(seed + static_cast<std::uint64_t>(i)), p);
    scenes[i].frame_id = "frame_" + std::to_string(i);
  }
  (void)threads;
  return scenes;
}

BevGrid map_points_to_bev(const std::vector<RadarPoint>& points, const BevGridSpec& spec) {
  validate_grid(spec);
  BevGrid grid;
  grid.spec = spec;
  grid.feature_dim = points.empty() ? 0 : static_cast<int>(points.front().feature.size());
  grid.occupancy.assign(spec.cell_count(), 0);
  grid.features.assign(static_cast<size_t>(spec.cell_count()) * grid.feature_dim, 0.0);

  // Sequential on purpose: last-write-wins needs the input order.
  for (const RadarPoint& pt : points) {
    if (static_cast<int>(pt.feature.size()) != grid.feature_dim) {
      throw std::invalid_argument("map_points_to_bev: inconsistent feature dimension");
    }
    if (!spec.in_range({pt.x, pt.y})) {
      ++grid.dropped_count;
      continue;
    }
    const int idx = spec.flat_index(spec.cell_ix(pt.x), spec.cell_iy(pt.y));
    grid.occupancy[idx] = 1;
    for (int f = 0; f < grid.feature_dim; ++f) {
      grid.features[static_cast<size_t>(idx) * grid.feature_dim + f] = pt.feature[f];
    }
  }
  return grid;
}

ContinuityReport continuity_scan(const OrientedBox3D& box_template, double delta_theta) {
  validate_box(box_template);
  if (!(delta_theta > 0.0)) {
    throw std::invalid_argument("continuity_scan: delta_theta must be positive");
  }
  const int n = static_cast<int>(std::ceil(2.0 * kPi / delta_theta));
  const double step = 2.0 * kPi / n;

  struct Sample {
    std::array<double, 8> chan;
    double amin_u, amin_v, theta, s, c;
  };
  std::vector<Sample> samples(n);
  const int threads = thread_budget();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (int k = 0; k < n; ++k) {
    OrientedBox3D b = box_template;
    b.theta = -kPi + (k + 1) * step;  // lands in (-pi, pi]
    const Rqr3dTargets t = encode(b);
    samples[k] = {{t.aabb.x_min, t.aabb.y_min, t.aabb.x_max, t.aabb.y_max, t.u, t.v,
                   t.d_x, t.d_y},
                  t.amin_u,
                  t.amin_v,
                  b.theta,
                  std::sin(b.theta),
                  std::cos(b.theta)};
  }
  (void)threads;

  ContinuityReport rep;
  rep.steps = n;
  rep.step_size = step;
  for (int k = 0; k < n; ++k) {
    const Sample& a = samples[k];
    const Sample& b = samples[(k + 1) % n];  // wrap pair included
    for (int c = 0; c < 8; ++c) {
      rep.target_max_jump[c] = std::max(rep.target_max_jump[c], std::fabs(b.chan[c] - a.chan[c]));
    }
    if (a.amin_u != b.amin_u) ++rep.amin_u_flips;
    if (a.amin_v != b.amin_v) ++rep.amin_v_flips;
    rep.theta_raw_max_jump = std::max(rep.theta_raw_max_jump, std::fabs(b.theta - a.theta));
    rep.sin_max_jump = std::max(rep.sin_max_jump, std::fabs(b.s - a.s));
    rep.cos_max_jump = std::max(rep.cos_max_jump, std::fabs(b.c - a.c));
  }
  return rep;
}

}  // namespace rqr3d
