// SPDX-License-Identifier: Apache-2.0
// Versioned JSON persistence for scenes, predictions, codec targets, and
// evaluation reports. All files carry "schema_version": 1; loading any other
// version is an error. Box/point fields round-trip exactly (shortest
// round-trip double formatting); report files round numbers to 9 significant
// digits so byte-level golden comparisons stay stable.
#pragma once

#include <string>
#include <vector>

#include "rqr3d/assign.hpp"
#include "rqr3d/metrics.hpp"
#include "rqr3d/scene.hpp"

namespace rqr3d {

inline constexpr int kSchemaVersion = 1;

struct FramePredictions {
  std::string frame_id;
  std::vector<ScoredBox> boxes;
};

struct FrameTargets {
  std::string frame_id;
  std::vector<int> class_ids;
  std::vector<Rqr3dTargets> targets;
};

void save_scenes(const std::string& path, const std::vector<Scene>& scenes);
std::vector<Scene> load_scenes(const std::string& path);

void save_predictions(const std::string& path, const std::vector<FramePredictions>& preds);
std::vector<FramePredictions> load_predictions(const std::string& path);

void save_targets(const std::string& path, const std::vector<FrameTargets>& frames);
std::vector<FrameTargets> load_targets(const std::string& path);

void save_eval_report(const std::string& path, const EvalReport& report);

// Flattens per-frame predictions into the evaluation input.
std::vector<DetectionRecord> flatten_predictions(const std::vector<FramePredictions>& preds);

// Value rounded to 9 significant digits (the report/golden-file precision).
double round_sig9(double x);

}  // namespace rqr3d
