// SPDX-License-Identifier: Apache-2.0
// Training losses for the detection heads: focal / BCE for classification
// heads, smooth-L1 for keypoint channels, GIoU for the encapsulating AABB,
// plus the bookkeeping around them (per-class normalization, objectness
// gating, deterministic reductions).
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rqr3d/geometry.hpp"

namespace rqr3d {

// Probabilities are clamped to [kProbEps, 1-kProbEps] before any log.
inline constexpr double kProbEps = 1e-7;
inline constexpr double kFocalAlphaDefault = 0.25;
inline constexpr double kFocalGammaDefault = 2.0;

// Fixed-order pairwise reduction; result does not depend on thread count
// and is reproducible across runs.
double pairwise_sum(std::span<const double> values);

struct LossGrad {
  double value = 0.0;
  double grad = 0.0;  // d value / d prediction
};

// y must be 0 or 1; alpha weights both label values symmetrically
// (alpha for y=1, alpha applied to the mirrored probability for y=0 follows
// from using p_t).
LossGrad focal_loss(double p, double y, double alpha = kFocalAlphaDefault,
                    double gamma = kFocalGammaDefault);
LossGrad bce_loss(double p, double y);

// Huber-style loss: 0.5 d^2 / beta inside |d| < beta, |d| - 0.5 beta outside.
// When relu_pred is set the prediction is rectified first (used for the
// nonnegative keypoint channels); the gradient is zero in the clipped region.
LossGrad smooth_l1(double pred, double target, double beta = 1.0, bool relu_pred = false);

struct GiouLossResult {
  double value = 0.0;
  // Gradient wrt the predicted corners, order x_min, y_min, x_max, y_max.
  double grad[4] = {0.0, 0.0, 0.0, 0.0};
};
// 1 - GIoU of two AABBs, differentiated analytically wrt the prediction.
GiouLossResult giou_loss(const Aabb2D& pred, const Aabb2D& target);

struct ClassLossGroup {
  int class_id = 0;
  std::vector<double> sample_losses;
  int positive_count = 0;
};
struct PerClassLoss {
  int class_id = 0;
  double normalized = 0.0;
};
struct ClassNormalizedResult {
  double total = 0.0;
  std::vector<PerClassLoss> per_class;
};
// Per class: sum(sample_losses) / max(1, positive_count); total sums classes.
ClassNormalizedResult class_normalized_classification_loss(
    std::span<const ClassLossGroup> groups);

struct CellLossTerms {
  double bbox = 0.0;
  double keypoint = 0.0;
  double centerness = 0.0;
};
struct FilteredLossTotals {
  double bbox = 0.0;
  double keypoint = 0.0;
  double centerness = 0.0;
  int kept_cells = 0;
};
// Zeroes localization terms for cells whose objectness label is background.
FilteredLossTotals objectness_filter(std::span<const CellLossTerms> terms,
                                     std::span<const std::uint8_t> objectness_labels);
// Same, gated on a predicted objectness probability instead of a hard label;
// a cell counts as foreground when its probability exceeds 0.5.
FilteredLossTotals objectness_filter(std::span<const CellLossTerms> terms,
                                     std::span<const double> objectness_probs);

inline double binarize_amin(double x) { return x >= 0.5 ? 1.0 : 0.0; }

}  // namespace rqr3d
