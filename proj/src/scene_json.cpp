// SPDX-License-Identifier: Apache-2.0
#include "rqr3d/scene_json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace rqr3d {

using nlohmann::json;

namespace {

json box_to_json(const OrientedBox3D& b) {
  return json{{"center", {b.x_ctr, b.y_ctr, b.z_ctr}},
              {"size", {b.w, b.l, b.h}},
              {"yaw", b.theta}};
}

OrientedBox3D box_from_json(const json& j) {
  OrientedBox3D b;
  const auto& c = j.at("center");
  const auto& s = j.at("size");
  b.x_ctr = c.at(0);
  b.y_ctr = c.at(1);
  b.z_ctr = c.at(2);
  b.w = s.at(0);
  b.l = s.at(1);
  b.h = s.at(2);
  b.theta = j.at("yaw");
  validate_box(b);
  return b;
}

json load_versioned(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
  }
  const int version = j.value("schema_version", -1);
  if (version != kSchemaVersion) {
    throw std::runtime_error("unsupported schema_version " + std::to_string(version) +
                             " in " + path + " (expected " +
                             std::to_string(kSchemaVersion) + ")");
  }
  return j;
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace

double round_sig9(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return std::strtod(buf, nullptr);
}

void save_scenes(const std::string& path, const std::vector<Scene>& scenes) {
  json frames = json::array();
  for (const Scene& s : scenes) {
    json boxes = json::array();
    for (const ClassedBox& cb : s.boxes) {
      json b = box_to_json(cb.box);
      b["class"] = cb.class_id;
      boxes.push_back(std::move(b));
    }
    json points = json::array();
    for (const RadarPoint& p : s.points) {
      points.push_back({{"x", p.x}, {"y", p.y}, {"feature", p.feature}});
    }
    json frame{{"frame_id", s.frame_id}, {"boxes", std::move(boxes)}};
    if (!s.points.empty()) frame["radar_points"] = std::move(points);
    frames.push_back(std::move(frame));
  }
  write_file(path, json{{"schema_version", kSchemaVersion}, {"frames", std::move(frames)}});
}

std::vector<Scene> load_scenes(const std::string& path) {
  const json j = load_versioned(path);
  std::vector<Scene> scenes;
  for (const json& frame : j.at("frames")) {
    Scene s;
    s.frame_id = frame.at("frame_id");
    for (const json& b : frame.at("boxes")) {
      s.boxes.push_back({box_from_json(b), b.at("class")});
    }
    if (frame.contains("radar_points")) {
      for (const json& p : frame.at("radar_points")) {
        RadarPoint pt;
        pt.x = p.at("x");
        pt.y = p.at("y");
        pt.feature = p.at("feature").get<std::vector<double>>();
        s.points.push_back(std::move(pt));
      }
    }
    scenes.push_back(std::move(s));
  }
  return scenes;
}

void save_predictions(const std::string& path, const std::vector<FramePredictions>& preds) {
  json frames = json::array();
  for (const FramePredictions& fp : preds) {
    json boxes = json::array();
    for (const ScoredBox& sb : fp.boxes) {
      json b = box_to_json(sb.box);
      b["class"] = sb.class_id;
      b["score"] = sb.score;
      boxes.push_back(std::move(b));
    }
    frames.push_back(json{{"frame_id", fp.frame_id}, {"boxes", std::move(boxes)}});
  }
  write_file(path, json{{"schema_version", kSchemaVersion}, {"frames", std::move(frames)}});
}

std::vector<FramePredictions> load_predictions(const std::string& path) {
  const json j = load_versioned(path);
  std::vector<FramePredictions> preds;
  for (const json& frame : j.at("frames")) {
    FramePredictions fp;
    fp.frame_id = frame.at("frame_id");
    for (const json& b : frame.at("boxes")) {
      ScoredBox sb;
      sb.box = box_from_json(b);
      sb.class_id = b.at("class");
      sb.score = b.at("score");
      fp.boxes.push_back(std::move(sb));
    }
    preds.push_back(std::move(fp));
  }
  return preds;
}

void save_targets(const std::string& path, const std::vector<FrameTargets>& frames) {
  json jframes = json::array();
  for (const FrameTargets& ft : frames) {
    if (ft.class_ids.size() != ft.targets.size()) {
      throw std::invalid_argument("save_targets: class/target count mismatch");
    }
    json targets = json::array();
    for (size_t i = 0; i < ft.targets.size(); ++i) {
      const Rqr3dTargets& t = ft.targets[i];
      targets.push_back({{"class", ft.class_ids[i]},
                         {"aabb", {t.aabb.x_min, t.aabb.y_min, t.aabb.x_max, t.aabb.y_max}},
                         {"u", t.u},
                         {"v", t.v},
                         {"amin_u", t.amin_u},
                         {"amin_v", t.amin_v},
                         {"d", {t.d_x, t.d_y}},
                         {"z_ctr", t.z_ctr},
                         {"h", t.h}});
    }
    jframes.push_back(json{{"frame_id", ft.frame_id}, {"targets", std::move(targets)}});
  }
  write_file(path, json{{"schema_version", kSchemaVersion}, {"frames", std::move(jframes)}});
}

std::vector<FrameTargets> load_targets(const std::string& path) {
  const json j = load_versioned(path);
  std::vector<FrameTargets> frames;
  for (const json& frame : j.at("frames")) {
    FrameTargets ft;
    ft.frame_id = frame.at("frame_id");
    for (const json& tj : frame.at("targets")) {
      Rqr3dTargets t;
      const auto& a = tj.at("aabb");
      t.aabb = {a.at(0), a.at(1), a.at(2), a.at(3)};
      t.u = tj.at("u");
      t.v = tj.at("v");
      t.amin_u = tj.at("amin_u");
      t.amin_v = tj.at("amin_v");
      t.d_x = tj.at("d").at(0);
      t.d_y = tj.at("d").at(1);
      t.z_ctr = tj.at("z_ctr");
      t.h = tj.at("h");
      ft.class_ids.push_back(tj.at("class"));
      ft.targets.push_back(t);
    }
    frames.push_back(std::move(ft));
  }
  return frames;
}

void save_eval_report(const std::string& path, const EvalReport& rep) {
  json per_class = json::array();
  for (size_t ci = 0; ci < rep.class_ids.size(); ++ci) {
    json ap = json::array();
    for (size_t tj = 0; tj < rep.dist_thresholds.size(); ++tj) {
      ap.push_back(round_sig9(rep.ap[ci][tj]));
    }
    per_class.push_back(json{{"class", rep.class_ids[ci]},
                             {"ap", std::move(ap)},
                             {"matched_pairs", rep.matched_pairs_per_class[ci]}});
  }
  json thresholds = json::array();
  for (double t : rep.dist_thresholds) thresholds.push_back(round_sig9(t));
  const json j{{"schema_version", kSchemaVersion},
               {"dist_thresholds", std::move(thresholds)},
               {"per_class", std::move(per_class)},
               {"mAP", round_sig9(rep.mean_ap)},
               {"mATE", round_sig9(rep.mate)},
               {"mASE", round_sig9(rep.mase)},
               {"mAOE", round_sig9(rep.maoe)},
               {"nds3", round_sig9(rep.nds3)},
               {"total_gt", rep.total_gt},
               {"total_preds", rep.total_preds}};
  write_file(path, j);
}

std::vector<DetectionRecord> flatten_predictions(const std::vector<FramePredictions>& preds) {
  std::vector<DetectionRecord> out;
  for (const FramePredictions& fp : preds) {
    for (const ScoredBox& sb : fp.boxes) out.push_back({sb, fp.frame_id});
  }
  return out;
}

}  // namespace rqr3d
