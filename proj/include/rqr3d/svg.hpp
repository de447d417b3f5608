// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

#include "rqr3d/nms.hpp"
#include "rqr3d/scene.hpp"

namespace rqr3d {

// Deterministic SVG of a scene in BEV: a light grid, ground-truth
// footprints (solid), predictions (dashed) and a heading tick from each
// center to its front-edge midpoint. The canvas covers
// [-half_extent, half_extent]^2; coordinates are written with 9 significant
// digits so identical inputs yield identical bytes.
std::string render_scene_svg(const Scene& scene, std::span<const ScoredBox> preds,
                             double half_extent, double pixels_per_meter = 10.0);

}  // namespace rqr3d
