// SPDX-License-Identifier: Apache-2.0
// Detection evaluation in the nuScenes style: greedy center-distance
// matching per class, interpolated average precision over distance
// thresholds, true-positive error means, and a composite score.
//
// Velocity and attribute errors have no counterpart in this artifact, so the
// composite uses the three errors that exist (translation, scale,
// orientation) with the weights (5*mAP + sum(1 - min(1, err))) / 8 and is
// reported as "nds3", not as the leaderboard NDS.
#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "rqr3d/nms.hpp"
#include "rqr3d/scene.hpp"

namespace rqr3d {

struct DetectionRecord {
  ScoredBox det;
  std::string frame_id;
};

struct DetMatch {
  bool matched = false;
  int scene_index = -1;  // into the gts span
  int gt_index = -1;     // into that scene's box list
  double center_dist = 0.0;
};

// Greedy per-frame, per-class matching in descending score; each prediction
// takes the nearest unmatched same-class ground truth within the threshold
// (BEV center distance). Score ties favor the lower input index, distance
// ties the lower ground-truth index. Throws when a prediction references a
// frame_id absent from gts.
std::vector<DetMatch> match_detections(std::span<const DetectionRecord> preds,
                                       std::span<const Scene> gts,
                                       double distance_threshold);

struct DetectionOutcome {
  double score = 0.0;
  bool matched = false;
};

// 101-point interpolated AP for one class at one threshold. With
// clip_floors (the benchmark default) the recall band below 0.1 is dropped,
// precisions are reduced by 0.1 and clamped at zero, and the mean is
// renormalized by 0.9. num_gt == 0 yields 0.
double average_precision(std::span<const DetectionOutcome> dets, int num_gt,
                         bool clip_floors = true);

struct MatchedBoxPair {
  OrientedBox3D pred;
  OrientedBox3D gt;
};

struct TpErrors {
  double ate = 0.0;  // meters
  double ase = 0.0;  // 1 - IoU of center/yaw-aligned boxes
  double aoe = 0.0;  // radians, in [0, pi]
};

// Plain means over matched pairs; throws on empty input.
TpErrors tp_errors(std::span<const MatchedBoxPair> pairs);

double composite_score(double mean_ap, const TpErrors& errors);

struct EvalConfig {
  std::vector<double> dist_thresholds{0.5, 1.0, 2.0, 4.0};
  double tp_error_threshold = 2.0;  // matches at this threshold feed tp_errors
  bool clip_ap_floors = true;
};

struct EvalReport {
  std::vector<int> class_ids;  // classes present in ground truth, ascending
  std::vector<double> dist_thresholds;
  // ap[i][j] = AP of class_ids[i] at dist_thresholds[j]
  std::vector<std::vector<double>> ap;
  std::vector<int> matched_pairs_per_class;  // at tp_error_threshold
  double mean_ap = 0.0;
  double mate = 0.0;
  double mase = 0.0;
  double maoe = 0.0;
  double nds3 = 0.0;
  int total_gt = 0;
  int total_preds = 0;
};

EvalReport evaluate(std::span<const Scene> gts, std::span<const DetectionRecord> preds,
                    const EvalConfig& config = {});

}  // namespace rqr3d
