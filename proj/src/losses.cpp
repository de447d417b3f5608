// SPDX-License-Identifier: Apache-2.0
#include "rqr3d/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rqr3d {

namespace {

double clamp_prob(double p) {
  return std::clamp(p, kProbEps, 1.0 - kProbEps);
}

void check_label(double y) {
  if (y != 0.0 && y != 1.0) throw std::invalid_argument("label must be 0 or 1");
}

double pairwise_sum_impl(const double* v, size_t n) {
  if (n <= 8) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += v[i];
    return acc;
  }
  const size_t half = n / 2;
  return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

LossGrad focal_loss(double p, double y, double alpha, double gamma) {
  check_label(y);
  if (!std::isfinite(p)) throw std::invalid_argument("focal_loss: non-finite probability");
  const double pc = clamp_prob(p);
  const double pt = (y == 1.0) ? pc : 1.0 - pc;
  const double one_m = 1.0 - pt;
  LossGrad r;
  r.value = -alpha * std::pow(one_m, gamma) * std::log(pt);
  const double d_pt = alpha * gamma * std::pow(one_m, gamma - 1.0) * std::log(pt) -
                      alpha * std::pow(one_m, gamma) / pt;
  r.grad = (y == 1.0) ? d_pt : -d_pt;
  if (p < kProbEps || p > 1.0 - kProbEps) r.grad = 0.0;  // clamped region is flat
  return r;
}

LossGrad bce_loss(double p, double y) {
  check_label(y);
  if (!std::isfinite(p)) throw std::invalid_argument("bce_loss: non-finite probability");
  const double pc = clamp_prob(p);
  LossGrad r;
  r.value = -(y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc));
  r.grad = (pc - y) / (pc * (1.0 - pc));
  if (p < kProbEps || p > 1.0 - kProbEps) r.grad = 0.0;
  return r;
}

LossGrad smooth_l1(double pred, double target, double beta, bool relu_pred) {
  if (!(beta > 0.0)) throw std::invalid_argument("smooth_l1: beta must be positive");
  double x = pred;
  double pass = 1.0;
  if (relu_pred && x < 0.0) {
    x = 0.0;
    pass = 0.0;
  }
  const double d = x - target;
  LossGrad r;
  if (std::fabs(d) < beta) {
    r.value = 0.5 * d * d / beta;
    r.grad = pass * d / beta;
  } else {
    r.value = std::fabs(d) - 0.5 * beta;
    r.grad = pass * (d > 0.0 ? 1.0 : -1.0);
  }
  return r;
}

GiouLossResult giou_loss(const Aabb2D& pred, const Aabb2D& target) {
  const double px0 = pred.x_min, py0 = pred.y_min, px1 = pred.x_max, py1 = pred.y_max;
  const double tx0 = target.x_min, ty0 = target.y_min, tx1 = target.x_max, ty1 = target.y_max;
  if (px1 < px0 || py1 < py0 || tx1 < tx0 || ty1 < ty0) {
    throw std::invalid_argument("giou_loss: inverted box");
  }

  const double pw = px1 - px0, ph = py1 - py0;
  const double area_p = pw * ph;
  const double area_t = (tx1 - tx0) * (ty1 - ty0);
  // dA/d(x0,y0,x1,y1) for the predicted box
  const double dA[4] = {-ph, -pw, ph, pw};

  const double ix0 = std::max(px0, tx0), iy0 = std::max(py0, ty0);
  const double ix1 = std::min(px1, tx1), iy1 = std::min(py1, ty1);
  const double iw = ix1 - ix0, ih = iy1 - iy0;
  const bool overlap = iw > 0.0 && ih > 0.0;
  const double inter = overlap ? iw * ih : 0.0;
  double dI[4] = {0, 0, 0, 0};
  if (overlap) {
    if (px0 > tx0) dI[0] = -ih;
    if (py0 > ty0) dI[1] = -iw;
    if (px1 < tx1) dI[2] = ih;
    if (py1 < ty1) dI[3] = iw;
  }

  const double uni = area_p + area_t - inter;
  double dU[4];
  for (int k = 0; k < 4; ++k) dU[k] = dA[k] - dI[k];

  const double cw = std::max(px1, tx1) - std::min(px0, tx0);
  const double ch = std::max(py1, ty1) - std::min(py0, ty0);
  const double hull = cw * ch;
  double dC[4] = {0, 0, 0, 0};
  if (px0 < tx0) dC[0] = -ch;
  if (py0 < ty0) dC[1] = -cw;
  if (px1 > tx1) dC[2] = ch;
  if (py1 > ty1) dC[3] = cw;

  GiouLossResult r;
  const double iou = inter / uni;
  const double giou = iou - (hull - uni) / hull;
  r.value = 1.0 - giou;
  for (int k = 0; k < 4; ++k) {
    const double d_iou = (dI[k] * uni - inter * dU[k]) / (uni * uni);
    const double d_pen = (dC[k] - dU[k]) / hull - (hull - uni) * dC[k] / (hull * hull);
    r.grad[k] = -d_iou + d_pen;
  }
  return r;
}

ClassNormalizedResult class_normalized_classification_loss(
    std::span<const ClassLossGroup> groups) {
  ClassNormalizedResult out;
  std::vector<double> class_totals;
  class_totals.reserve(groups.size());
  for (const ClassLossGroup& g : groups) {
    const double denom = std::max(1, g.positive_count);
    const double norm = pairwise_sum(g.sample_losses) / denom;
    out.per_class.push_back({g.class_id, norm});
    class_totals.push_back(norm);
  }
  out.total = pairwise_sum(class_totals);
  return out;
}

FilteredLossTotals objectness_filter(std::span<const CellLossTerms> terms,
                                     std::span<const std::uint8_t> objectness_labels) {
  if (terms.size() != objectness_labels.size()) {
    throw std::invalid_argument("objectness_filter: size mismatch");
  }
  std::vector<double> bbox, keypoint, centerness;
  FilteredLossTotals out;
  for (size_t i = 0; i < terms.size(); ++i) {
    if (!objectness_labels[i]) continue;
    bbox.push_back(terms[i].bbox);
    keypoint.push_back(terms[i].keypoint);
    centerness.push_back(terms[i].centerness);
    ++out.kept_cells;
  }
  out.bbox = pairwise_sum(bbox);
  out.keypoint = pairwise_sum(keypoint);
  out.centerness = pairwise_sum(centerness);
  return out;
}

FilteredLossTotals objectness_filter(std::span<const CellLossTerms> terms,
                                     std::span<const double> objectness_probs) {
  if (terms.size() != objectness_probs.size()) {
    throw std::invalid_argument("objectness_filter: size mismatch");
  }
  std::vector<std::uint8_t> labels(terms.size());
  for (size_t i = 0; i < terms.size(); ++i) {
    labels[i] = objectness_probs[i] > 0.5 ? 1 : 0;
  }
  return objectness_filter(terms, std::span<const std::uint8_t>(labels));
}

}  // namespace rqr3d
