// SPDX-License-Identifier: Apache-2.0
#include "rqr3d/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "rqr3d/losses.hpp"
#include "rqr3d/overlap.hpp"

namespace rqr3d {

namespace {

double center_dist(const OrientedBox3D& a, const OrientedBox3D& b) {
  return std::hypot(a.x_ctr - b.x_ctr, a.y_ctr - b.y_ctr);
}

// 1 - 3D IoU after aligning centers and yaw: only the sizes matter.
double size_aligned_scale_error(const OrientedBox3D& pred, const OrientedBox3D& gt) {
  const double iw = std::min(pred.w, gt.w);
  const double il = std::min(pred.l, gt.l);
  const double ih = std::min(pred.h, gt.h);
  const double inter = iw * il * ih;
  const double uni = pred.w * pred.l * pred.h + gt.w * gt.l * gt.h - inter;
  return 1.0 - inter / uni;
}

}  // namespace

std::vector<DetMatch> match_detections(std::span<const DetectionRecord> preds,
                                       std::span<const Scene> gts,
                                       double distance_threshold) {
  if (!(distance_threshold > 0.0)) {
    throw std::invalid_argument("match_detections: threshold must be positive");
  }
  std::unordered_map<std::string, int> frame_index;
  for (size_t s = 0; s < gts.size(); ++s) frame_index[gts[s].frame_id] = static_cast<int>(s);

  std::vector<DetMatch> result(preds.size());
  // (scene, class) -> prediction indices; greedy order is score-descending
  // within each group, so group processing order does not matter.
  std::map<std::pair<int, int>, std::vector<int>> groups;
  for (size_t i = 0; i < preds.size(); ++i) {
    auto it = frame_index.find(preds[i].frame_id);
    if (it == frame_index.end()) {
      throw std::invalid_argument("match_detections: prediction frame_id '" +
                                  preds[i].frame_id + "' not present in ground truth");
    }
    groups[{it->second, preds[i].det.class_id}].push_back(static_cast<int>(i));
  }

  for (auto& [key, idx] : groups) {
    const auto& [scene_idx, class_id] = key;
    const Scene& scene = gts[scene_idx];
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      return preds[a].det.score > preds[b].det.score;
    });
    std::vector<char> gt_taken(scene.boxes.size(), 0);
    for (int pi : idx) {
      int best_gt = -1;
      double best_dist = distance_threshold;
      for (size_t g = 0; g < scene.boxes.size(); ++g) {
        if (gt_taken[g] || scene.boxes[g].class_id != class_id) continue;
        const double d = center_dist(preds[pi].det.box, scene.boxes[g].box);
        // strict: equal distances keep the earlier ground-truth index
        if (d < best_dist) {
          best_dist = d;
          best_gt = static_cast<int>(g);
        }
      }
      if (best_gt >= 0) {
        gt_taken[best_gt] = 1;
        result[pi] = {true, scene_idx, best_gt, best_dist};
      }
    }
  }
  return result;
}

double average_precision(std::span<const DetectionOutcome> dets, int num_gt,
                         bool clip_floors) {
  if (num_gt < 0) throw std::invalid_argument("average_precision: negative num_gt");
  if (num_gt == 0) return 0.0;

  std::vector<int> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dets[a].score > dets[b].score; });

  std::vector<double> recall, precision;
  recall.reserve(dets.size());
  precision.reserve(dets.size());
  int tp = 0, fp = 0;
  for (int i : order) {
    dets[i].matched ? ++tp : ++fp;
    recall.push_back(static_cast<double>(tp) / num_gt);
    precision.push_back(static_cast<double>(tp) / (tp + fp));
  }

  // precision interpolated at 101 evenly spaced recall points; beyond the
  // last achieved recall the precision is 0, before the first it holds flat.
  constexpr int kPoints = 101;
  std::array<double, kPoints> interp{};
  for (int k = 0; k < kPoints; ++k) {
    const double r = k / 100.0;
    if (recall.empty() || r > recall.back()) {
      interp[k] = 0.0;
      continue;
    }
    if (r <= recall.front()) {
      interp[k] = precision.front();
      continue;
    }
    const auto hi = std::lower_bound(recall.begin(), recall.end(), r);
    const size_t j = static_cast<size_t>(hi - recall.begin());
    const double r0 = recall[j - 1], r1 = recall[j];
    const double p0 = precision[j - 1], p1 = precision[j];
    interp[k] = (r1 == r0) ? p1 : p0 + (p1 - p0) * (r - r0) / (r1 - r0);
  }

  if (!clip_floors) {
    double acc = 0.0;
    for (double p : interp) acc += p;
    return acc / kPoints;
  }
  // Benchmark convention: drop the recall band below 0.1, subtract the 0.1
  // precision floor, renormalize.
  double acc = 0.0;
  for (int k = 11; k < kPoints; ++k) acc += std::max(0.0, interp[k] - 0.1);
  return acc / 90 / 0.9;
}

TpErrors tp_errors(std::span<const MatchedBoxPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("tp_errors: no matched pairs");
  std::vector<double> ate, ase, aoe;
  ate.reserve(pairs.size());
  ase.reserve(pairs.size());
  aoe.reserve(pairs.size());
  for (const MatchedBoxPair& mp : pairs) {
    ate.push_back(center_dist(mp.pred, mp.gt));
    ase.push_back(size_aligned_scale_error(mp.pred, mp.gt));
    aoe.push_back(std::fabs(wrap_angle(mp.pred.theta - mp.gt.theta)));
  }
  const double n = static_cast<double>(pairs.size());
  return {pairwise_sum(ate) / n, pairwise_sum(ase) / n, pairwise_sum(aoe) / n};
}

double composite_score(double mean_ap, const TpErrors& errors) {
  const double terms = (1.0 - std::min(1.0, errors.ate)) +
                       (1.0 - std::min(1.0, errors.ase)) +
                       (1.0 - std::min(1.0, errors.aoe));
  return (5.0 * mean_ap + terms) / 8.0;
}

EvalReport evaluate(std::span<const Scene> gts, std::span<const DetectionRecord> preds,
                    const EvalConfig& config) {
  if (config.dist_thresholds.empty()) {
    throw std::invalid_argument("evaluate: no distance thresholds");
  }
  EvalReport rep;
  rep.dist_thresholds = config.dist_thresholds;
  rep.total_preds = static_cast<int>(preds.size());

  std::set<int> classes;
  std::map<int, int> gt_per_class;
  for (const Scene& s : gts) {
    for (const ClassedBox& cb : s.boxes) {
      classes.insert(cb.class_id);
      ++gt_per_class[cb.class_id];
      ++rep.total_gt;
    }
  }
  rep.class_ids.assign(classes.begin(), classes.end());

  // AP per class and threshold
  rep.ap.assign(rep.class_ids.size(), std::vector<double>(config.dist_thresholds.size(), 0.0));
  std::vector<double> ap_flat;
  for (size_t tj = 0; tj < config.dist_thresholds.size(); ++tj) {
    const auto matches = match_detections(preds, gts, config.dist_thresholds[tj]);
    for (size_t ci = 0; ci < rep.class_ids.size(); ++ci) {
      const int cls = rep.class_ids[ci];
      std::vector<DetectionOutcome> outcomes;
      for (size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].det.class_id != cls) continue;
        outcomes.push_back({preds[i].det.score, matches[i].matched});
      }
      rep.ap[ci][tj] = average_precision(outcomes, gt_per_class[cls], config.clip_ap_floors);
      ap_flat.push_back(rep.ap[ci][tj]);
    }
  }
  rep.mean_ap = ap_flat.empty() ? 0.0 : pairwise_sum(ap_flat) / ap_flat.size();

  // TP errors from matches at the dedicated threshold, per class then
  // averaged; classes without a single match contribute the saturated
  // error 1.0 (benchmark convention for undefined TP metrics).
  const auto tp_matches = match_detections(preds, gts, config.tp_error_threshold);
  rep.matched_pairs_per_class.assign(rep.class_ids.size(), 0);
  std::vector<double> ates, ases, aoes;
  for (size_t ci = 0; ci < rep.class_ids.size(); ++ci) {
    const int cls = rep.class_ids[ci];
    std::vector<MatchedBoxPair> pairs;
    for (size_t i = 0; i < preds.size(); ++i) {
      if (preds[i].det.class_id != cls || !tp_matches[i].matched) continue;
      pairs.push_back({preds[i].det.box,
                       gts[tp_matches[i].scene_index].boxes[tp_matches[i].gt_index].box});
    }
    rep.matched_pairs_per_class[ci] = static_cast<int>(pairs.size());
    if (pairs.empty()) {
      ates.push_back(1.0);
      ases.push_back(1.0);
      aoes.push_back(1.0);
    } else {
      const TpErrors e = tp_errors(pairs);
      ates.push_back(e.ate);
      ases.push_back(e.ase);
      aoes.push_back(e.aoe);
    }
  }
  if (!ates.empty()) {
    rep.mate = pairwise_sum(ates) / ates.size();
    rep.mase = pairwise_sum(ases) / ases.size();
    rep.maoe = pairwise_sum(aoes) / aoes.size();
  }
  rep.nds3 = composite_score(rep.mean_ap, {rep.mate, rep.mase, rep.maoe});
  return rep;
}

}  // namespace rqr3d
