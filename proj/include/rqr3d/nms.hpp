// SPDX-License-Identifier: Apache-2.0
// Greedy non-maximum suppression over scored oriented boxes: a standard
// variant working on encapsulating AABBs and a rotated variant working on
// exact BEV overlap.
#pragma once

#include <span>
#include <vector>

#include "rqr3d/geometry.hpp"

namespace rqr3d {

struct ScoredBox {
  OrientedBox3D box;
  double score = 0.0;
  int class_id = 0;
};

// Kept original indices, highest score first. Candidates are visited in
// descending score (ties favor the lower input index); a kept box suppresses
// every remaining box whose IoU is strictly greater than iou_threshold, so
// boxes exactly at the threshold survive. With class_aware set, suppression
// only acts within a class.
std::vector<int> nms_standard(std::span<const ScoredBox> dets, double iou_threshold,
                              bool class_aware = false);
std::vector<int> nms_rotated(std::span<const ScoredBox> dets, double iou_threshold,
                             bool class_aware = false);

}  // namespace rqr3d
