// SPDX-License-Identifier: Apache-2.0
// End-to-end acceptance checks for the oriented-box toolkit. Each numbered
// check prints one PASS/FAIL line; the process exit code is the number of
// failures. Run it from anywhere; scratch files go to a temp directory.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <unordered_map>
#include <vector>

#include "cli_helpers.hpp"
#include "oracles.hpp"
#include "rqr3d/assign.hpp"
#include "rqr3d/batch.hpp"
#include "rqr3d/codec.hpp"
#include "rqr3d/losses.hpp"
#include "rqr3d/metrics.hpp"
#include "rqr3d/nms.hpp"
#include "rqr3d/overlap.hpp"
#include "rqr3d/scene.hpp"
#include "rqr3d/scene_json.hpp"

using namespace rqr3d;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d. %-28s %s\n", ok ? "PASS" : "FAIL", idx, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

// Corpus shared by the round-trip and corner checks: sizes 0.3-20 m, theta
// at least 1e-6 away from every cardinal angle.
std::vector<OrientedBox3D> off_cardinal_corpus(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<OrientedBox3D> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    OrientedBox3D b = oracle::random_box(rng, 20.0, 0.3, 20.0);
    b.theta = oracle::random_theta_off_cardinal(rng, 1e-6);
    out.push_back(b);
  }
  return out;
}

// --- 1: codec round trip ---------------------------------------------------
void check_round_trip(const std::vector<OrientedBox3D>& corpus) {
  double d_center = 0.0, d_size = 0.0, d_theta = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (const OrientedBox3D& b : corpus) {
    const OrientedBox3D r = decode(encode(b));
    d_center = std::max(d_center, std::hypot(r.x_ctr - b.x_ctr, r.y_ctr - b.y_ctr));
    d_center = std::max(d_center, std::fabs(r.z_ctr - b.z_ctr));
    d_size = std::max({d_size, std::fabs(r.w - b.w), std::fabs(r.l - b.l),
                       std::fabs(r.h - b.h)});
    d_theta = std::max(d_theta, std::fabs(wrap_angle(r.theta - b.theta)));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = d_center < 1e-9 && d_size < 1e-9 && d_theta < 1e-9 && secs < 5.0;
  report(1, "codec round trip", ok,
         "n=" + std::to_string(corpus.size()) + " max dcenter=" + fmt(d_center) +
             " dsize=" + fmt(d_size) + " dtheta=" + fmt(d_theta) + " time=" + fmt(secs) + "s");
}

// --- 2: corner-set equivalence ---------------------------------------------
void check_corner_sets(const std::vector<OrientedBox3D>& corpus) {
  double worst = 0.0, worst_z = 0.0;
  auto measure = [&](const OrientedBox3D& b) {
    const CornerSet3D got = reconstruct_corners(encode(b));
    const CornerSet3D want = corners_3d(b);
    worst = std::max(worst, oracle::set_distance(got.bottom, want.bottom));
    worst_z = std::max({worst_z, std::fabs(got.z_bottom - want.z_bottom),
                        std::fabs(got.z_top - want.z_top)});
  };
  for (const OrientedBox3D& b : corpus) measure(b);

  Rng rng(202);
  const double cardinals[4] = {0.0, kPi / 2, kPi, -kPi / 2};
  for (int i = 0; i < 10000; ++i) {
    OrientedBox3D b = oracle::random_box(rng, 20.0, 0.3, 20.0);
    b.theta = cardinals[i % 4];
    measure(b);
  }
  const bool ok = worst < 1e-9 && worst_z < 1e-9;
  report(2, "corner-set equivalence", ok,
         "corpus+10000 cardinal, max set distance=" + fmt(worst) + " dz=" + fmt(worst_z));
}

// --- 3: continuity sweep ---------------------------------------------------
void check_continuity() {
  const OrientedBox3D box{0, 0, 0, 2, 4, 1.5, 0.0};
  const ContinuityReport rep = continuity_scan(box, 1e-4);
  double worst = 0.0;
  for (double j : rep.target_max_jump) worst = std::max(worst, j);
  const bool jumps_ok = worst <= 1.2e-3;
  const bool raw_ok = rep.theta_raw_max_jump > 2 * kPi - 2 * rep.step_size &&
                      rep.theta_raw_max_jump <= 2 * kPi;
  const bool amin_ok = rep.amin_u_flips <= 8 && rep.amin_v_flips <= 8;
  report(3, "continuity sweep", jumps_ok && raw_ok && amin_ok,
         "max jump=" + fmt(worst) + " (bound 1.2e-3), raw-theta jump=" +
             fmt(rep.theta_raw_max_jump) + ", amin flips=" +
             std::to_string(rep.amin_u_flips) + "/" + std::to_string(rep.amin_v_flips));
}

// --- 4: gradient verification ----------------------------------------------
void check_gradients() {
  Rng rng(204);
  double worst = 0.0;
  int checked_focal = 0, checked_bce = 0, checked_sl1 = 0, checked_giou = 0;

  while (checked_focal < 1000) {
    const double p = rng.uniform(0.01, 0.99);
    const double y = rng.uniform_int(2);
    const double fd = oracle::central_diff([&](double x) { return focal_loss(x, y).value; }, p);
    worst = std::max(worst, oracle::rel_err(focal_loss(p, y).grad, fd));
    ++checked_focal;
  }
  while (checked_bce < 1000) {
    const double p = rng.uniform(0.01, 0.99);
    const double y = rng.uniform_int(2);
    const double fd = oracle::central_diff([&](double x) { return bce_loss(x, y).value; }, p);
    worst = std::max(worst, oracle::rel_err(bce_loss(p, y).grad, fd));
    ++checked_bce;
  }
  while (checked_sl1 < 1000) {
    const double pred = rng.uniform(-4.0, 4.0);
    const double target = rng.uniform(-4.0, 4.0);
    if (std::fabs(std::fabs(pred - target) - 1.0) < 1e-4) continue;  // kink
    if (std::fabs(pred - target) < 1e-4) continue;                   // tiny gradient
    const double fd = oracle::central_diff(
        [&](double x) { return smooth_l1(x, target).value; }, pred);
    worst = std::max(worst, oracle::rel_err(smooth_l1(pred, target).grad, fd));
    ++checked_sl1;
  }
  while (checked_giou < 1000) {
    Aabb2D pred{rng.uniform(-5, 0), rng.uniform(-5, 0), rng.uniform(0.2, 5),
                rng.uniform(0.2, 5)};
    const Aabb2D target{rng.uniform(-5, 0), rng.uniform(-5, 0), rng.uniform(0.2, 5),
                        rng.uniform(0.2, 5)};
    const double gaps[4] = {pred.x_min - target.x_min, pred.y_min - target.y_min,
                            pred.x_max - target.x_max, pred.y_max - target.y_max};
    bool near_kink = false;
    for (double g : gaps) near_kink |= std::fabs(g) < 1e-4;
    if (near_kink) continue;
    const GiouLossResult r = giou_loss(pred, target);
    double* coords[4] = {&pred.x_min, &pred.y_min, &pred.x_max, &pred.y_max};
    bool usable = true;
    for (int k = 0; k < 4 && usable; ++k) {
      const double save = *coords[k];
      const double fd = oracle::central_diff(
          [&](double x) {
            *coords[k] = x;
            const double v = giou_loss(pred, target).value;
            *coords[k] = save;
            return v;
          },
          save);
      if (std::fabs(fd) < 1e-6 && std::fabs(r.grad[k]) < 1e-6) continue;  // both flat
      worst = std::max(worst, oracle::rel_err(r.grad[k], fd));
    }
    ++checked_giou;
  }
  report(4, "analytic gradients", worst < 1e-4,
         "4x1000 instances, worst rel err=" + fmt(worst));
}

// --- 5: overlap vs Monte-Carlo oracles -------------------------------------
void check_overlap_oracles() {
  Rng rng(205);
  double worst_bev = 0.0, worst_3d = 0.0, worst_aabb = 0.0;
  const long samples = 10000000;
  for (int i = 0; i < 200; ++i) {
    OrientedBox3D a = oracle::random_box(rng, 2.0, 0.8, 6.0);
    OrientedBox3D b = oracle::random_box(rng, 2.0, 0.8, 6.0);
    if (i % 4 == 0) {  // force deeper overlap for part of the set
      b.x_ctr = a.x_ctr + rng.uniform(-0.5, 0.5);
      b.y_ctr = a.y_ctr + rng.uniform(-0.5, 0.5);
      b.z_ctr = a.z_ctr + rng.uniform(-0.3, 0.3);
    }
    const std::uint64_t seed = 90000 + i;
    worst_bev = std::max(worst_bev, std::fabs(iou_rotated_bev(a, b).iou -
                                              oracle::mc_iou_bev(a, b, samples, seed)));
    worst_3d = std::max(worst_3d, std::fabs(iou_3d(a, b) -
                                            oracle::mc_iou_3d(a, b, samples, seed + 7)));
  }
  for (int i = 0; i < 2000; ++i) {
    const Aabb2D a{rng.uniform(-5, 0), rng.uniform(-5, 0), rng.uniform(0.1, 5),
                   rng.uniform(0.1, 5)};
    const Aabb2D b{rng.uniform(-5, 0), rng.uniform(-5, 0), rng.uniform(0.1, 5),
                   rng.uniform(0.1, 5)};
    worst_aabb = std::max(worst_aabb,
                          std::fabs(iou_aabb(a, b).iou - oracle::aabb_iou_closed_form(a, b)));
  }
  const bool ok = worst_bev < 0.01 && worst_3d < 0.01 && worst_aabb < 1e-12;
  report(5, "overlap oracles", ok,
         "200 pairs x1e7 samples, max |d_bev|=" + fmt(worst_bev) + " |d_3d|=" +
             fmt(worst_3d) + ", aabb closed-form diff=" + fmt(worst_aabb));
}

// --- 6: NMS vs brute force -------------------------------------------------
void check_nms() {
  Rng rng(206);
  int bad_scenes = 0;
  for (int scene = 0; scene < 100; ++scene) {
    std::vector<ScoredBox> dets;
    for (int i = 0; i < 200; ++i) {
      ScoredBox sb;
      sb.box = oracle::random_box(rng, 12.0, 0.8, 6.0);
      sb.score = rng.next_unit();
      sb.class_id = rng.uniform_int(3);
      dets.push_back(sb);
    }
    const double thr = 0.2 + 0.4 * rng.next_unit();
    const auto std_got = nms_standard(dets, thr);
    const auto std_want = oracle::brute_nms(dets, thr, [](const OrientedBox3D& x,
                                                          const OrientedBox3D& y) {
      return iou_aabb(aabb_of(corners_bev(x)), aabb_of(corners_bev(y))).iou;
    });
    const auto rot_got = nms_rotated(dets, thr);
    const auto rot_want = oracle::brute_nms(dets, thr, [](const OrientedBox3D& x,
                                                          const OrientedBox3D& y) {
      return iou_rotated_bev(x, y).iou;
    });
    if (std_got != std_want || rot_got != rot_want) ++bad_scenes;
  }
  report(6, "nms brute-force parity", bad_scenes == 0,
         "100 scenes x 200 boxes, mismatching scenes=" + std::to_string(bad_scenes));
}

// --- 7: assignment round trip + objectness gate ----------------------------
void check_assignment() {
  Rng rng(207);
  double worst = 0.0;
  int fg_total = 0;
  const BevGridSpec grid{64, 1.0, {-32, -32}};
  for (int trial = 0; trial < 10; ++trial) {
    Scene sc;
    sc.frame_id = "acc";
    for (int i = 0; i < 12; ++i) {
      OrientedBox3D b = oracle::random_box(rng, 20.0, 0.8, 6.0);
      b.theta = oracle::random_theta_off_cardinal(rng, 1e-3);
      sc.boxes.push_back({b, i % 3});
    }
    const TargetMap tm = assign_targets(sc, grid);
    for (int iy = 0; iy < grid.cells_per_side; ++iy) {
      for (int ix = 0; ix < grid.cells_per_side; ++ix) {
        const CellTarget& cell = tm.cells[grid.flat_index(ix, iy)];
        if (!cell.objectness) continue;
        ++fg_total;
        const OrientedBox3D got = decode(cell_to_targets(grid, ix, iy, cell));
        const OrientedBox3D& want = sc.boxes[cell.box_index].box;
        worst = std::max({worst, std::fabs(got.x_ctr - want.x_ctr),
                          std::fabs(got.y_ctr - want.y_ctr), std::fabs(got.w - want.w),
                          std::fabs(got.l - want.l),
                          std::fabs(wrap_angle(got.theta - want.theta))});
      }
    }
  }

  Scene empty;
  empty.frame_id = "bg";
  const TargetMap bg = assign_targets(empty, grid);
  std::vector<CellLossTerms> terms(bg.cells.size());
  std::vector<std::uint8_t> labels(bg.cells.size());
  for (size_t i = 0; i < terms.size(); ++i) {
    terms[i] = {rng.next_unit(), rng.next_unit(), rng.next_unit()};
    labels[i] = bg.cells[i].objectness;
  }
  const FilteredLossTotals f = objectness_filter(terms, labels);
  const bool gate_ok = f.bbox == 0.0 && f.keypoint == 0.0 && f.centerness == 0.0 &&
                       f.kept_cells == 0 && bg.foreground_count == 0;

  report(7, "assignment round trip", worst < 1e-9 && fg_total > 0 && gate_ok,
         std::to_string(fg_total) + " foreground cells, max residual=" + fmt(worst) +
             ", empty-scene filtered losses all zero=" + (gate_ok ? "yes" : "no"));
}

// --- 8: metrics sanity -----------------------------------------------------
void check_metrics() {
  // perfect predictions
  SceneGenParams params;
  params.box_count = 12;
  params.half_extent = 30.0;
  std::vector<Scene> gts;
  for (int f = 0; f < 4; ++f) {
    gts.push_back(generate_scene(980 + f, params));
    gts.back().frame_id = "frame_" + std::to_string(f);
  }
  std::vector<DetectionRecord> preds;
  Rng rng(208);
  for (const Scene& s : gts) {
    for (const ClassedBox& cb : s.boxes) {
      preds.push_back({{cb.box, rng.uniform(0.5, 1.0), cb.class_id}, s.frame_id});
    }
  }
  const EvalReport perfect = evaluate(gts, preds);
  const bool perfect_ok = std::fabs(perfect.mean_ap - 1.0) < 1e-12 && perfect.mate == 0.0 &&
                          perfect.mase == 0.0 && perfect.maoe == 0.0;

  // translation noise with mean mu: boxes on a coarse lattice so each
  // prediction's nearest ground truth is its own source
  const double mu = 0.8;
  std::vector<Scene> lat_gts(100);
  std::vector<DetectionRecord> lat_preds;
  for (int f = 0; f < 100; ++f) {
    lat_gts[f].frame_id = "lat_" + std::to_string(f);
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        OrientedBox3D b{10.0 * i, 10.0 * j, 0.0, 2.0, 4.0, 1.5, 0.3};
        lat_gts[f].boxes.push_back({b, 0});
        OrientedBox3D p = b;
        const double phi = rng.uniform(-kPi, kPi);
        const double r = rng.uniform(0.0, 2.0 * mu);
        p.x_ctr += r * std::cos(phi);
        p.y_ctr += r * std::sin(phi);
        lat_preds.push_back({{p, rng.next_unit(), 0}, lat_gts[f].frame_id});
      }
    }
  }
  const EvalReport noisy = evaluate(lat_gts, lat_preds);
  const bool noise_ok = std::fabs(noisy.mate - mu) < 0.02 * mu;

  // pi/2 yaw perturbation: gt theta 0, predictions at exactly pi/2, matched
  // counts a power of two so the mean stays bit-exact
  std::vector<Scene> yaw_gts(4);
  std::vector<DetectionRecord> yaw_preds;
  for (int f = 0; f < 4; ++f) {
    yaw_gts[f].frame_id = "yaw_" + std::to_string(f);
    for (int i = 0; i < 16; ++i) {
      OrientedBox3D b{6.0 * i, 0.0, 0.0, 2.0, 4.0, 1.5, 0.0};
      yaw_gts[f].boxes.push_back({b, 0});
      OrientedBox3D p = b;
      p.theta = kPi / 2;
      yaw_preds.push_back({{p, rng.next_unit(), 0}, yaw_gts[f].frame_id});
    }
  }
  const EvalReport yawed = evaluate(yaw_gts, yaw_preds);
  const bool yaw_ok = yawed.maoe == kPi / 2;  // bit-exact

  report(8, "metrics sanity", perfect_ok && noise_ok && yaw_ok,
         "perfect mAP=" + fmt(perfect.mean_ap) + ", noisy mATE=" + fmt(noisy.mate) +
             " (mu=" + fmt(mu) + "), mAOE residual=" + fmt(yawed.maoe - kPi / 2));
}

// --- 9: rasterizer vs hash map ---------------------------------------------
void check_rasterizer() {
  Rng rng(209);
  const BevGridSpec spec{128, 0.5, {-32, -32}};
  std::vector<RadarPoint> pts;
  pts.reserve(100000);
  for (int i = 0; i < 100000; ++i) {
    RadarPoint pt;
    pt.x = rng.uniform(-40.0, 40.0);  // 25% land outside the grid
    pt.y = rng.uniform(-40.0, 40.0);
    pt.feature = {rng.next_unit(), rng.next_unit(), rng.next_unit()};
    pts.push_back(std::move(pt));
  }
  const BevGrid grid = map_points_to_bev(pts, spec);

  std::unordered_map<int, const std::vector<double>*> cells;
  int dropped = 0;
  const double extent = spec.cells_per_side * spec.meters_per_cell;
  for (const RadarPoint& pt : pts) {
    const double rx = pt.x - spec.origin.x, ry = pt.y - spec.origin.y;
    if (!(rx >= 0 && ry >= 0 && rx < extent && ry < extent)) {
      ++dropped;
      continue;
    }
    const int ix = static_cast<int>(std::floor(rx / spec.meters_per_cell));
    const int iy = static_cast<int>(std::floor(ry / spec.meters_per_cell));
    cells[iy * spec.cells_per_side + ix] = &pt.feature;
  }
  bool ok = grid.dropped_count == dropped;
  int occupied = 0;
  for (auto o : grid.occupancy) occupied += o;
  ok = ok && occupied == static_cast<int>(cells.size());
  for (const auto& [idx, feat] : cells) {
    if (!grid.occupancy[idx]) ok = false;
    for (int f = 0; f < grid.feature_dim && ok; ++f) {
      if (grid.features[static_cast<size_t>(idx) * grid.feature_dim + f] != (*feat)[f])
        ok = false;
    }
  }
  report(9, "rasterizer parity", ok,
         "100000 points, dropped=" + std::to_string(grid.dropped_count) + " (oracle " +
             std::to_string(dropped) + "), occupied=" + std::to_string(occupied));
}

// --- 10: CLI determinism ---------------------------------------------------
struct CliCheck {
  std::string name;
  bool ok = true;
};

// Runs the command twice and under thread counts 1 and 8; all product files
// and stdout (modulo the echoed per-run paths) must be byte-identical.
bool deterministic(const std::string& args_template,
                   const std::vector<std::string>& out_names) {
  auto run_with = [&](const std::string& tag, const std::string& env) {
    std::string args = args_template;
    std::vector<std::string> concrete;
    // substitute {out0}, {out1}, ... with per-run file names
    for (size_t i = 0; i < out_names.size(); ++i) {
      const std::string key = "{out" + std::to_string(i) + "}";
      concrete.push_back(cli::path(out_names[i] + "." + tag));
      for (size_t pos = args.find(key); pos != std::string::npos; pos = args.find(key)) {
        args.replace(pos, key.size(), concrete.back());
      }
    }
    cli::RunResult r = cli::run(args, env);
    for (const std::string& p : concrete) r.out = cli::canon(r.out, {p});
    return r;
  };
  const auto a = run_with("a", "");
  const auto b = run_with("b", "");
  const auto t1 = run_with("t1", "RQR3D_THREADS=1 ");
  const auto t8 = run_with("t8", "RQR3D_THREADS=8 ");
  if (a.exit_code != 0 || b.exit_code != 0 || t1.exit_code != 0 || t8.exit_code != 0)
    return false;
  if (a.out != b.out || t1.out != t8.out || a.out != t1.out) return false;
  for (const std::string& name : out_names) {
    const std::string bytes = cli::slurp(cli::path(name + ".a"));
    if (bytes.empty()) return false;
    if (bytes != cli::slurp(cli::path(name + ".b"))) return false;
    if (cli::slurp(cli::path(name + ".t1")) != cli::slurp(cli::path(name + ".t8")))
      return false;
    if (bytes != cli::slurp(cli::path(name + ".t1"))) return false;
  }
  return true;
}

void check_cli_determinism() {
  // fixed inputs shared by the downstream commands
  const std::string scenes = cli::path("acc_scenes.json");
  const std::string preds = cli::path("acc_preds.json");
  const auto seeded = cli::run("gen --seed 77 --frames 3 --boxes 25 --points 3 --jitter 1 --out " +
                               scenes + " --pred-out " + preds);
  if (seeded.exit_code != 0) {
    report(10, "cli determinism", false, "seed corpus generation failed");
    return;
  }

  std::vector<CliCheck> checks;
  checks.push_back({"gen", deterministic(
      "gen --seed 77 --frames 3 --boxes 25 --points 3 --jitter 1 --out {out0} --pred-out {out1}",
      {"det_scenes.json", "det_preds.json"})});
  checks.push_back({"convert", deterministic(
      "convert --direction roundtrip --in " + scenes + " --out {out0}",
      {"det_targets.json"})});
  checks.push_back({"continuity", deterministic(
      "continuity --w 2 --l 4 --step 0.0005 --format json --out {out0}",
      {"det_cont.json"})});
  checks.push_back({"nms", deterministic(
      "nms --iou-thresh 0.3 --mode both --in " + preds + " --out {out0}",
      {"det_nms.json"})});
  checks.push_back({"eval", deterministic(
      "eval --gt " + scenes + " --pred " + preds + " --out {out0}",
      {"det_report.json"})});
  checks.push_back({"render", deterministic(
      "render --frame 0 --in " + scenes + " --pred " + preds + " --out {out0}",
      {"det_frame.svg"})});

  bool all_ok = true;
  std::string detail;
  for (const CliCheck& c : checks) {
    all_ok = all_ok && c.ok;
    if (!detail.empty()) detail += " ";
    detail += c.name + (c.ok ? ":ok" : ":FAIL");
  }
  report(10, "cli determinism", all_ok, detail + " (2 runs, threads 1 vs 8)");
}

}  // namespace

int main() {
  std::printf("acceptance checks, binary under test: %s\n", cli::binary_path());
  const auto corpus = off_cardinal_corpus(120000, 201);
  check_round_trip(corpus);
  check_corner_sets(corpus);
  check_continuity();
  check_gradients();
  check_overlap_oracles();
  check_nms();
  check_assignment();
  check_metrics();
  check_rasterizer();
  check_cli_determinism();
  std::printf("%d of 10 checks passed\n", 10 - g_failures);
  return g_failures;
}
