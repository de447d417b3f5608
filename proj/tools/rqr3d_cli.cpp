// SPDX-License-Identifier: Apache-2.0
// Command-line front end: scene generation, codec conversion, continuity
// sweeps, NMS, evaluation, and SVG rendering. All file and stdout output is
// deterministic for fixed inputs; timing lines go to stderr.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rqr3d/batch.hpp"
#include "rqr3d/codec.hpp"
#include "rqr3d/metrics.hpp"
#include "rqr3d/nms.hpp"
#include "rqr3d/parallel.hpp"
#include "rqr3d/scene.hpp"
#include "rqr3d/scene_json.hpp"
#include "rqr3d/svg.hpp"

namespace {

using namespace rqr3d;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

// Symmetric max point-set distance between two corner quadruples.
double corner_set_distance(const std::array<Vec2, 4>& a, const std::array<Vec2, 4>& b) {
  double worst = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const auto& from = pass ? b : a;
    const auto& to = pass ? a : b;
    for (const Vec2& p : from) {
      double best = 1e300;
      for (const Vec2& q : to) best = std::min(best, dist(p, q));
      worst = std::max(worst, best);
    }
  }
  return worst;
}

struct GenArgs {
  std::uint64_t seed = 1;
  int frames = 4;
  int boxes = 20;
  int grid_n = 100;
  double cell_m = 0.8;
  int points = 0;
  double jitter = 0.0;
  std::string out;
  std::string pred_out;
};

int cmd_gen(const GenArgs& a) {
  const auto t0 = Clock::now();
  SceneGenParams params;
  params.box_count = a.boxes;
  params.half_extent = 0.5 * a.grid_n * a.cell_m;
  params.points_per_box = a.points;
  const std::vector<Scene> scenes = generate_scenes(a.seed, a.frames, params);
  save_scenes(a.out, scenes);

  int total_boxes = 0;
  for (const Scene& s : scenes) total_boxes += static_cast<int>(s.boxes.size());
  std::cout << "gen: wrote " << scenes.size() << " frames, " << total_boxes
            << " boxes to " << a.out << "\n";

  if (!a.pred_out.empty()) {
    // Jittered copies of the ground truth: centers displaced by a uniform
    // radius with mean --jitter, scores drawn per box.
    std::vector<FramePredictions> preds;
    for (size_t f = 0; f < scenes.size(); ++f) {
      Rng rng(splitmix64(a.seed ^ 0x9e3779b97f4a7c15ULL) + f);
      FramePredictions fp;
      fp.frame_id = scenes[f].frame_id;
      for (const ClassedBox& cb : scenes[f].boxes) {
        ScoredBox sb;
        sb.box = cb.box;
        const double phi = rng.uniform(-kPi, kPi);
        const double r = rng.uniform(0.0, 2.0 * a.jitter);
        sb.box.x_ctr += r * std::cos(phi);
        sb.box.y_ctr += r * std::sin(phi);
        sb.score = rng.uniform(0.5, 1.0);
        sb.class_id = cb.class_id;
        fp.boxes.push_back(sb);
      }
      preds.push_back(std::move(fp));
    }
    save_predictions(a.pred_out, preds);
    std::cout << "gen: wrote predictions (jitter mean " << fmt9(a.jitter) << " m) to "
              << a.pred_out << "\n";
  }
  std::cerr << "gen: " << total_boxes << " boxes in " << ms_since(t0) << " ms\n";
  return 0;
}

struct ConvertArgs {
  std::string in;
  std::string out;
  std::string direction = "encode";
};

int cmd_convert(const ConvertArgs& a) {
  const auto t0 = Clock::now();
  if (a.direction == "decode") {
    const std::vector<FrameTargets> frames = load_targets(a.in);
    std::vector<Scene> scenes;
    int total = 0;
    for (const FrameTargets& ft : frames) {
      Scene s;
      s.frame_id = ft.frame_id;
      const std::vector<OrientedBox3D> boxes = decode_batch(ft.targets);
      for (size_t i = 0; i < boxes.size(); ++i) {
        s.boxes.push_back({boxes[i], ft.class_ids[i]});
      }
      total += static_cast<int>(boxes.size());
      scenes.push_back(std::move(s));
    }
    save_scenes(a.out, scenes);
    std::cout << "convert: decoded " << total << " boxes to " << a.out << "\n";
    std::cerr << "convert: " << ms_since(t0) << " ms\n";
    return 0;
  }

  const std::vector<Scene> scenes = load_scenes(a.in);
  std::vector<FrameTargets> frames;
  int total = 0;
  int cardinal = 0;
  double max_center = 0.0, max_size = 0.0, max_corner = 0.0;
  for (const Scene& s : scenes) {
    FrameTargets ft;
    ft.frame_id = s.frame_id;
    std::vector<OrientedBox3D> boxes;
    for (const ClassedBox& cb : s.boxes) {
      boxes.push_back(cb.box);
      ft.class_ids.push_back(cb.class_id);
    }
    ft.targets = encode_batch(boxes);
    for (const Rqr3dTargets& t : ft.targets) {
      if (t.u < kAxisAlignedTol && t.v < kAxisAlignedTol) ++cardinal;
    }
    if (a.direction == "roundtrip") {
      const std::vector<OrientedBox3D> back = decode_batch(ft.targets);
      for (size_t i = 0; i < boxes.size(); ++i) {
        max_center = std::max(max_center, std::hypot(back[i].x_ctr - boxes[i].x_ctr,
                                                     back[i].y_ctr - boxes[i].y_ctr));
        // size residual over the unordered {w,l} pair: quarter-turn label
        // swaps at cardinal angles are not errors
        const double direct = std::max(std::fabs(back[i].w - boxes[i].w),
                                       std::fabs(back[i].l - boxes[i].l));
        const double swapped = std::max(std::fabs(back[i].w - boxes[i].l),
                                        std::fabs(back[i].l - boxes[i].w));
        max_size = std::max(max_size, std::min(direct, swapped));
        max_corner = std::max(
            max_corner, corner_set_distance(corners_bev(back[i]), corners_bev(boxes[i])));
      }
    }
    total += static_cast<int>(boxes.size());
    frames.push_back(std::move(ft));
  }
  save_targets(a.out, frames);
  std::cout << "convert: encoded " << total << " boxes to " << a.out << "\n";
  std::cout << "convert: cardinal-angle boxes flagged: " << cardinal << "\n";
  if (a.direction == "roundtrip") {
    std::cout << "convert: round-trip residuals: center " << fmt9(max_center) << " m, size "
              << fmt9(max_size) << " m, corner-set " << fmt9(max_corner) << " m\n";
  }
  std::cerr << "convert: " << ms_since(t0) << " ms\n";
  return 0;
}

struct ContinuityArgs {
  double w = 2.0;
  double l = 4.0;
  double step = 1e-4;
  std::string out;
  std::string format = "csv";
};

int cmd_continuity(const ContinuityArgs& a) {
  OrientedBox3D tpl;
  tpl.w = a.w;
  tpl.l = a.l;
  const ContinuityReport rep = continuity_scan(tpl, a.step);
  const double bound = 2.0 * (a.w + a.l) * rep.step_size;

  std::ostringstream body;
  if (a.format == "json") {
    body << "{\n  \"schema_version\": 1,\n  \"step\": " << fmt9(rep.step_size)
         << ",\n  \"steps\": " << rep.steps << ",\n  \"lipschitz_bound\": " << fmt9(bound)
         << ",\n  \"channels\": {\n";
    for (size_t c = 0; c < kContinuityChannelNames.size(); ++c) {
      body << "    \"" << kContinuityChannelNames[c]
           << "\": " << fmt9(rep.target_max_jump[c]) << (c + 1 < 8 ? ",\n" : "\n");
    }
    body << "  },\n  \"amin_u_flips\": " << rep.amin_u_flips
         << ",\n  \"amin_v_flips\": " << rep.amin_v_flips
         << ",\n  \"baseline_theta_raw\": " << fmt9(rep.theta_raw_max_jump)
         << ",\n  \"baseline_sin\": " << fmt9(rep.sin_max_jump)
         << ",\n  \"baseline_cos\": " << fmt9(rep.cos_max_jump) << "\n}\n";
  } else {
    // channel: regression channel name; max_adjacent_jump: largest change
    // between neighboring sweep samples; bound: 2(w+l)*step for continuous
    // channels, empty otherwise
    body << "channel,max_adjacent_jump,bound\n";
    for (size_t c = 0; c < kContinuityChannelNames.size(); ++c) {
      body << kContinuityChannelNames[c] << ',' << fmt9(rep.target_max_jump[c]) << ','
           << fmt9(bound) << "\n";
    }
    body << "amin_u_flips," << rep.amin_u_flips << ",\n";
    body << "amin_v_flips," << rep.amin_v_flips << ",\n";
    body << "baseline_theta_raw," << fmt9(rep.theta_raw_max_jump) << ",\n";
    body << "baseline_sin," << fmt9(rep.sin_max_jump) << ",\n";
    body << "baseline_cos," << fmt9(rep.cos_max_jump) << ",\n";
  }
  std::ofstream out(a.out);
  if (!out) throw std::runtime_error("cannot write file: " + a.out);
  out << body.str();

  double worst = 0.0;
  for (double j : rep.target_max_jump) worst = std::max(worst, j);
  std::cout << "continuity: " << rep.steps << " steps, max continuous-channel jump "
            << fmt9(worst) << " (bound " << fmt9(bound) << "), raw-theta baseline jump "
            << fmt9(rep.theta_raw_max_jump) << "\n";
  return 0;
}

struct NmsArgs {
  std::string in;
  std::string out;
  double iou_thresh = 0.5;
  std::string mode = "standard";
  bool class_aware = false;
};

int cmd_nms(const NmsArgs& a) {
  const std::vector<FramePredictions> preds = load_predictions(a.in);
  const auto t0 = Clock::now();

  std::vector<FramePredictions> kept_frames;
  int in_count = 0, kept_count = 0;
  long pair_count = 0;
  int only_standard = 0, only_rotated = 0, in_both = 0;
  for (const FramePredictions& fp : preds) {
    const long n = static_cast<long>(fp.boxes.size());
    in_count += static_cast<int>(n);
    pair_count += n * (n - 1) / 2;

    std::vector<int> kept;
    if (a.mode == "standard") {
      kept = nms_standard(fp.boxes, a.iou_thresh, a.class_aware);
    } else if (a.mode == "rotated") {
      kept = nms_rotated(fp.boxes, a.iou_thresh, a.class_aware);
    } else {  // both: rotated result is written, difference reported
      const std::vector<int> ks = nms_standard(fp.boxes, a.iou_thresh, a.class_aware);
      kept = nms_rotated(fp.boxes, a.iou_thresh, a.class_aware);
      const std::set<int> s(ks.begin(), ks.end());
      const std::set<int> r(kept.begin(), kept.end());
      for (int i : s) {
        r.count(i) ? ++in_both : ++only_standard;
      }
      for (int i : r) {
        if (!s.count(i)) ++only_rotated;
      }
    }

    FramePredictions out_frame;
    out_frame.frame_id = fp.frame_id;
    for (int i : kept) out_frame.boxes.push_back(fp.boxes[i]);
    kept_count += static_cast<int>(out_frame.boxes.size());
    kept_frames.push_back(std::move(out_frame));
  }
  const double elapsed_ms = ms_since(t0);
  save_predictions(a.out, kept_frames);

  std::cout << "nms(" << a.mode << "): kept " << kept_count << " of " << in_count
            << " boxes at iou > " << fmt9(a.iou_thresh) << " -> " << a.out << "\n";
  if (a.mode == "both") {
    std::cout << "nms: kept by both " << in_both << ", standard-only " << only_standard
              << ", rotated-only " << only_rotated << "\n";
  }
  if (elapsed_ms > 0.0) {
    std::cerr << "nms: ~" << static_cast<long>(pair_count / (elapsed_ms / 1000.0))
              << " box-pairs/s (" << pair_count << " pairs, " << elapsed_ms << " ms)\n";
  }
  return 0;
}

struct EvalArgs {
  std::string gt;
  std::string pred;
  std::string out;
  std::vector<double> dist_thresholds{0.5, 1.0, 2.0, 4.0};
  double tp_thresh = 2.0;
  bool no_clip = false;
};

int cmd_eval(const EvalArgs& a) {
  const std::vector<Scene> gts = load_scenes(a.gt);
  const std::vector<DetectionRecord> preds = flatten_predictions(load_predictions(a.pred));
  EvalConfig cfg;
  cfg.dist_thresholds = a.dist_thresholds;
  cfg.tp_error_threshold = a.tp_thresh;
  cfg.clip_ap_floors = !a.no_clip;
  const EvalReport rep = evaluate(gts, preds, cfg);
  if (!a.out.empty()) save_eval_report(a.out, rep);

  std::cout << "eval: " << rep.total_preds << " predictions vs " << rep.total_gt
            << " ground-truth boxes\n";
  std::cout << "class";
  for (double t : rep.dist_thresholds) std::cout << "\tAP@" << fmt9(t);
  std::cout << "\tmatches\n";
  for (size_t ci = 0; ci < rep.class_ids.size(); ++ci) {
    std::cout << rep.class_ids[ci];
    for (size_t tj = 0; tj < rep.dist_thresholds.size(); ++tj) {
      std::cout << '\t' << fmt9(round_sig9(rep.ap[ci][tj]));
    }
    std::cout << '\t' << rep.matched_pairs_per_class[ci] << "\n";
  }
  std::cout << "mAP " << fmt9(round_sig9(rep.mean_ap)) << "  mATE "
            << fmt9(round_sig9(rep.mate)) << "  mASE " << fmt9(round_sig9(rep.mase))
            << "  mAOE " << fmt9(round_sig9(rep.maoe)) << "  NDS-3 "
            << fmt9(round_sig9(rep.nds3)) << "\n";
  return 0;
}

struct RenderArgs {
  std::string in;
  std::string pred;
  std::string out;
  int frame = 0;
  int grid_n = 100;
  double cell_m = 0.8;
  std::string format = "svg";
};

int cmd_render(const RenderArgs& a) {
  if (a.format != "svg") {
    throw std::invalid_argument("render: only --format svg is supported");
  }
  const std::vector<Scene> scenes = load_scenes(a.in);
  if (a.frame < 0 || a.frame >= static_cast<int>(scenes.size())) {
    throw std::invalid_argument("render: frame index out of range (file has " +
                                std::to_string(scenes.size()) + " frames)");
  }
  const Scene& scene = scenes[a.frame];

  std::vector<ScoredBox> pred_boxes;
  if (!a.pred.empty()) {
    for (const FramePredictions& fp : load_predictions(a.pred)) {
      if (fp.frame_id == scene.frame_id) {
        pred_boxes = fp.boxes;
        break;
      }
    }
  }
  const double half_extent = 0.5 * a.grid_n * a.cell_m;
  const std::string svg = render_scene_svg(scene, pred_boxes, half_extent);
  std::ofstream out(a.out);
  if (!out) throw std::runtime_error("cannot write file: " + a.out);
  out << svg;
  std::cout << "render: frame '" << scene.frame_id << "' (" << scene.boxes.size()
            << " boxes, " << pred_boxes.size() << " predictions) -> " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oriented-box BEV toolkit: keypoint codec, NMS, evaluation"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* sgen = app.add_subcommand("gen", "Generate synthetic scenes (and optional predictions)");
  sgen->add_option("--seed", gen.seed, "RNG seed");
  sgen->add_option("--frames", gen.frames, "Number of frames");
  sgen->add_option("--boxes", gen.boxes, "Boxes per frame");
  sgen->add_option("--grid-n", gen.grid_n, "Grid cells per side (sets scene extent)");
  sgen->add_option("--cell-m", gen.cell_m, "Cell size in meters");
  sgen->add_option("--points", gen.points, "Radar points per box");
  sgen->add_option("--jitter", gen.jitter, "Mean center jitter for predictions (m)");
  sgen->add_option("--out", gen.out, "Output scene file")->required();
  sgen->add_option("--pred-out", gen.pred_out, "Optional jittered-prediction output file");

  ConvertArgs conv;
  CLI::App* sconv = app.add_subcommand("convert", "Convert boxes to targets or back");
  sconv->add_option("--in", conv.in, "Input file")->required();
  sconv->add_option("--out", conv.out, "Output file")->required();
  sconv->add_option("--direction", conv.direction, "encode | decode | roundtrip")
      ->check(CLI::IsMember({"encode", "decode", "roundtrip"}));

  ContinuityArgs cont;
  CLI::App* scont = app.add_subcommand("continuity", "Sweep theta and report target jumps");
  scont->add_option("--w", cont.w, "Box width (m)");
  scont->add_option("--l", cont.l, "Box length (m)");
  scont->add_option("--step", cont.step, "Sweep step (rad)");
  scont->add_option("--out", cont.out, "Output report file")->required();
  scont->add_option("--format", cont.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  NmsArgs nms;
  CLI::App* snms = app.add_subcommand(
      "nms", "Suppress overlapping detections (IoU strictly above threshold)");
  snms->add_option("--in", nms.in, "Prediction file")->required();
  snms->add_option("--out", nms.out, "Filtered prediction file")->required();
  snms->add_option("--iou-thresh", nms.iou_thresh, "IoU threshold");
  snms->add_option("--mode", nms.mode, "standard | rotated | both")
      ->check(CLI::IsMember({"standard", "rotated", "both"}));
  snms->add_flag("--class-aware", nms.class_aware, "Suppress only within a class");

  EvalArgs eval;
  CLI::App* seval = app.add_subcommand("eval", "Evaluate predictions against ground truth");
  seval->add_option("--gt", eval.gt, "Ground-truth scene file")->required();
  seval->add_option("--pred", eval.pred, "Prediction file")->required();
  seval->add_option("--out", eval.out, "Report JSON output");
  seval->add_option("--dist-thresh", eval.dist_thresholds,
                    "Matching distance thresholds (m)");
  seval->add_option("--tp-thresh", eval.tp_thresh, "Threshold feeding TP errors (m)");
  seval->add_flag("--no-clip", eval.no_clip, "Disable recall/precision floor clipping");

  RenderArgs render;
  CLI::App* srender = app.add_subcommand("render", "Render a frame to SVG");
  srender->add_option("--in", render.in, "Scene file")->required();
  srender->add_option("--pred", render.pred, "Optional prediction file");
  srender->add_option("--out", render.out, "Output SVG")->required();
  srender->add_option("--frame", render.frame, "Frame index");
  srender->add_option("--grid-n", render.grid_n, "Grid cells per side (sets canvas extent)");
  srender->add_option("--cell-m", render.cell_m, "Cell size in meters");
  srender->add_option("--format", render.format, "Output format (svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sgen->parsed()) return cmd_gen(gen);
    if (sconv->parsed()) return cmd_convert(conv);
    if (scont->parsed()) return cmd_continuity(cont);
    if (snms->parsed()) return cmd_nms(nms);
    if (seval->parsed()) return cmd_eval(eval);
    if (srender->parsed()) return cmd_render(render);
  } catch (const std::invalid_argument& e) {
    std::cerr << "[error:validation] " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "[error:io] " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "[error:internal] " << e.what() << "\n";
    return 4;
  }
  return 0;
}
