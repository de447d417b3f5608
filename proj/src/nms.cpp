// SPDX-License-Identifier: Apache-2.0
#include "rqr3d/nms.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "rqr3d/overlap.hpp"

namespace rqr3d {

namespace {

template <typename IouFn>
std::vector<int> greedy_nms(std::span<const ScoredBox> dets, double iou_threshold,
                            bool class_aware, IouFn&& iou) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw std::invalid_argument("nms: iou_threshold must lie in [0, 1]");
  }
  for (const ScoredBox& sb : dets) validate_box(sb.box);

  std::vector<int> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  // stable sort keeps input order on score ties
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dets[a].score > dets[b].score; });

  std::vector<char> suppressed(dets.size(), 0);
  std::vector<int> kept;
  for (size_t oi = 0; oi < order.size(); ++oi) {
    const int i = order[oi];
    if (suppressed[i]) continue;
    kept.push_back(i);
    for (size_t oj = oi + 1; oj < order.size(); ++oj) {
      const int j = order[oj];
      if (suppressed[j]) continue;
      if (class_aware && dets[i].class_id != dets[j].class_id) continue;
      if (iou(dets[i].box, dets[j].box) > iou_threshold) suppressed[j] = 1;
    }
  }
  return kept;
}

}  // namespace

std::vector<int> nms_standard(std::span<const ScoredBox> dets, double iou_threshold,
                              bool class_aware) {
  return greedy_nms(dets, iou_threshold, class_aware,
                    [](const OrientedBox3D& a, const OrientedBox3D& b) {
                      return iou_aabb(aabb_of(corners_bev(a)), aabb_of(corners_bev(b))).iou;
                    });
}

std::vector<int> nms_rotated(std::span<const ScoredBox> dets, double iou_threshold,
                             bool class_aware) {
  return greedy_nms(dets, iou_threshold, class_aware,
                    [](const OrientedBox3D& a, const OrientedBox3D& b) {
                      return iou_rotated_bev(a, b).iou;
                    });
}

}  // namespace rqr3d
