#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <vector>

#include <CLI11.hpp>

#include "curb/calib.hpp"
#include "curb/cli.hpp"
#include "curb/error.hpp"
#include "curb/estimators.hpp"
#include "curb/io.hpp"
#include "curb/metrics.hpp"
#include "curb/synth.hpp"

namespace fs = std::filesystem;

namespace curb::cli {

namespace {

using io::Json;

// Every value option is captured as text so the resolver can layer env and
// config sources underneath it.
struct Command {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::vector<std::string> names;

  void option(const std::string& name, const std::string& help, const std::string& def = {}) {
    std::string full = help + " [env " + Settings::env_name(name);
    if (!def.empty()) full += ", default " + def;
    full += "]";
    app->add_option("--" + name, values[name], full);
    names.push_back(name);
  }

  std::map<std::string, std::string> given() const {
    std::map<std::string, std::string> out;
    for (const auto& n : names) {
      if (app->get_option("--" + n)->count() > 0) out[n] = values.at(n);
    }
    return out;
  }
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
    case ErrorCode::Schema:
    case ErrorCode::FrameIndexing:
      return kExitIo;
    default:
      return kExitAlgorithm;
  }
}

std::string require(const Settings& s, const std::string& option) {
  auto v = s.text(option);
  if (!v || v->empty()) throw UsageError("--" + option + " is required");
  return *v;
}

void warn(const std::string& message) { std::cerr << "warning: " << message << "\n"; }

// ---------------------------------------------------------------------------

int calibrate_lidar_base(const Settings& s) {
  const fs::path cloud_path = require(s, "cloud");
  const fs::path out = require(s, "out");
  RansacOptions opt;
  opt.iterations = static_cast<int>(s.integer("ransac-iters", opt.iterations));
  opt.inlier_tol = s.real("tol", opt.inlier_tol);
  opt.seed = static_cast<std::uint64_t>(s.integer("seed", 0));
  opt.min_inlier_ratio = s.real("min-inlier-ratio", opt.min_inlier_ratio);
  const std::string id = s.text("sensor-id", "lidar0");
  if (opt.iterations <= 0 || !(opt.inlier_tol > 0.0)) {
    throw UsageError("--ransac-iters and --tol must be positive");
  }

  const PointCloud cloud = io::read_point_cloud(cloud_path);
  const PlaneFit fit = fit_ground_plane(cloud, opt, FrameId::lidar_ego(id));
  const RigidTransform edge = lidar_base_from_ground(fit.plane, id);

  io::CalibrationFile calib;
  if (fs::exists(out)) calib = io::parse_calibration(io::read_text(out));
  for (const auto& w : calib.warnings) warn(w);
  calib.upsert_extrinsic(edge);
  io::write_text_atomic(out, io::serialize_calibration(calib));

  std::cout << "inlier_ratio " << io::format_real(fit.inlier_ratio()) << "\n"
            << "plane_rms_m " << io::format_real(fit.rms) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

int estimate(const Settings& s) {
  const std::string method = s.text("method", "p3d");
  if (method != "p3d" && method != "ipm") throw UsageError("--method must be p3d or ipm");
  const fs::path calib_path = require(s, "calib");
  const fs::path det_path = require(s, "detections");
  const fs::path out = require(s, "out");
  const std::string camera_id = s.text("camera-id", "cam0");

  std::optional<double> alpha;
  std::optional<std::string> lines_path;
  double height = 0.0, gamma = 0.0;
  std::optional<std::string> cp_path;
  if (method == "p3d") {
    alpha = s.real("alpha");
    lines_path = s.text("vanishing-lines");
    if (alpha.has_value() == lines_path.has_value()) {
      throw UsageError("p3d needs exactly one of --alpha or --vanishing-lines");
    }
    const auto h = s.real("height");
    if (!h) throw UsageError("p3d needs --height");
    height = *h;
    gamma = s.real("gamma", 0.0);
  } else {
    cp_path = s.text("control-points");
    if (!cp_path) throw UsageError("ipm needs --control-points");
  }

  const io::CalibrationFile calib = io::parse_calibration(io::read_text(calib_path));
  for (const auto& w : calib.warnings) warn(w);
  const auto cam_it = std::find_if(calib.cameras.begin(), calib.cameras.end(),
                                   [&](const io::NamedCamera& c) { return c.id == camera_id; });
  if (cam_it == calib.cameras.end()) {
    std::cerr << "error: camera '" << camera_id << "' not found in " << calib_path << "\n";
    return kExitIo;
  }
  const CameraModel& cam = cam_it->model;
  const io::DetectionFile dets = io::parse_detections(io::read_text(det_path));

  // Contact points as observed, and their undistorted counterparts.
  std::vector<ContactPoint> observed, ideal;
  std::size_t without_box = 0;
  for (const auto& r : dets.records) {
    if (!r.bbox2d) {
      ++without_box;
      continue;
    }
    ContactPoint c = contact_point(*r.bbox2d, r.bbox_id);
    observed.push_back(c);
    c.pixel = undistort(cam, c.pixel);
    ideal.push_back(c);
  }
  if (without_box > 0) warn(std::to_string(without_box) + " record(s) without bbox2d ignored");

  std::vector<io::EstimationRecord> records(observed.size());
  for (std::size_t i = 0; i < observed.size(); ++i) {
    records[i].bbox_id = observed[i].source_bbox_id;
    records[i].u = observed[i].pixel.u;
    records[i].v = observed[i].pixel.v;
    records[i].method = method;
  }

  if (method == "p3d") {
    if (lines_path) {
      std::vector<ImageLine> lines = io::parse_lines_csv(io::read_text(*lines_path));
      for (auto& l : lines) {
        l.p = undistort(cam, l.p);
        l.q = undistort(cam, l.q);
      }
      alpha = pitch_from_vanishing(cam, vanishing_point(lines));
      std::cerr << "alpha_rad " << io::format_real(*alpha) << "\n";
    }
    P3DConfig cfg;
    cfg.camera = cam;
    cfg.height = height;
    cfg.alpha = *alpha;
    cfg.gamma = gamma;
    try {
      cfg.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    const P3DBatchResult res = p3d_batch(cfg, ideal);
    for (const auto& e : res.estimates) {
      records[e.index].point = e.point;
      records[e.index].distance_m = e.distance();
    }
    for (const auto& k : res.skipped) records[k.index].status = std::string(to_string(k.reason));
  } else {
    std::vector<GroundCorrespondence> cps = io::parse_control_points_csv(io::read_text(*cp_path));
    for (auto& c : cps) c.pixel = undistort(cam, c.pixel);
    const IpmFit fit = ipm_fit(cps);
    std::cerr << "ipm_rms_residual_m " << io::format_real(fit.rms_residual_m) << "\n";
    for (std::size_t i = 0; i < ideal.size(); ++i) {
      const PixelPoint& p = ideal[i].pixel;
      if (!cam.contains(p)) {
        records[i].status = std::string(to_string(SkipReason::OutOfBounds));
        continue;
      }
      if (!fit.sees_ground(p)) {
        records[i].status = std::string(to_string(SkipReason::AtOrAboveHorizon));
        continue;
      }
      try {
        const Vector2 g = ipm_map(fit.homography, p);
        records[i].point = Vector3(g.x(), 0.0, g.y());
        records[i].distance_m = g.norm();
      } catch (const Error&) {
        records[i].status = std::string(to_string(SkipReason::AtOrAboveHorizon));
      }
    }
  }

  const auto ok = std::count_if(records.begin(), records.end(),
                                [](const io::EstimationRecord& r) { return r.status == "ok"; });
  if (records.empty()) warn("no detections with 2D boxes; writing an empty file");
  else if (ok == 0) warn("every detection was skipped");
  io::write_text_atomic(out, io::serialize_estimations(records));
  return kExitOk;
}

// ---------------------------------------------------------------------------

std::string distance_definition(const std::string& method) {
  if (method == "ipm") {
    return "ground-plane norm of the target contact point, measured from the camera foot "
           "point on the road (truth field gt_ground_distance)";
  }
  return "euclidean norm of the camera-frame 3D contact point, measured from the camera "
         "optical center (truth field gt_distance)";
}

int eval_distance(const Settings& s, const fs::path& pred_path, const fs::path& gt_path,
                  const fs::path& out) {
  const double bin_width = s.real("bin-width", 10.0);
  if (!(bin_width > 0.0)) throw UsageError("--bin-width must be positive");
  const Scenario scenario = parse_scenario(s.text("scenario", "even"));

  const auto preds = io::parse_estimations(io::read_text(pred_path));
  const io::DetectionFile gt = io::parse_detections(io::read_text(gt_path));

  std::string method = s.text("method", "");
  if (method.empty()) {
    for (const auto& p : preds) {
      if (p.method.empty()) continue;
      if (!method.empty() && method != p.method) {
        throw Error(ErrorCode::Schema, "estimates mix methods; pass --method");
      }
      method = p.method;
    }
    if (method.empty()) method = "p3d";
  }
  const char* truth_key = method == "ipm" ? "gt_ground_distance" : "gt_distance";

  std::map<std::string, double> truth;
  for (std::size_t i = 0; i < gt.raw.size(); ++i) {
    const Json& j = gt.raw[i];
    const auto it = j.find(truth_key);
    if (gt.records[i].bbox_id.empty() || it == j.end() || !it->is_number()) continue;
    truth[gt.records[i].bbox_id] = it->get<double>();
  }

  std::vector<DistancePair> pairs;
  std::size_t unmatched = 0, skipped = 0;
  for (const auto& p : preds) {
    if (p.status != "ok" || !p.distance_m) {
      ++skipped;
      continue;
    }
    const auto it = truth.find(p.bbox_id);
    if (it == truth.end()) {
      ++unmatched;
      continue;
    }
    pairs.push_back({it->second, *p.distance_m});
  }
  if (unmatched > 0) warn(std::to_string(unmatched) + " estimate(s) without a truth record");

  const DistanceErrorProfile prof = distance_error_profile(pairs, bin_width, method, scenario);

  Json bins = Json::array();
  std::string csv = "range_lo,range_hi,count,mae\n";
  for (const auto& b : prof.bins) {
    bins.push_back(Json{{"range_lo", b.range_lo},
                        {"range_hi", b.range_hi},
                        {"count", b.count},
                        {"mae", b.mean_abs_error ? Json(*b.mean_abs_error) : Json(nullptr)}});
    csv += io::format_real(b.range_lo) + "," + io::format_real(b.range_hi) + "," +
           std::to_string(b.count) + "," +
           (b.mean_abs_error ? io::format_real(*b.mean_abs_error) : std::string()) + "\n";
  }
  const auto overall = prof.overall_mae();
  Json report{{"task", "distance"},
              {"method", method},
              {"distance_definition", distance_definition(method)},
              {"scenario", std::string(to_string(scenario))},
              {"bin_width_m", bin_width},
              {"count", prof.total_count()},
              {"skipped", skipped},
              {"unmatched", unmatched},
              {"overall_mae", overall ? Json(*overall) : Json(nullptr)},
              {"bins", bins}};

  fs::path csv_path = s.text("bins-out", "");
  if (csv_path.empty()) {
    csv_path = out;
    csv_path.replace_extension(".bins.csv");
  }
  io::write_text_atomic(csv_path, csv);
  io::write_text_atomic(out, io::dump(report, 2) + "\n");
  return kExitOk;
}

Json ap_json(const ApResult& r) {
  return Json{{"ap", r.ap},          {"precision", r.precision},
              {"recall", r.recall},  {"tp", r.true_positives},
              {"fp", r.false_positives}, {"num_gt", r.num_gt},
              {"empty_gt", r.empty_gt}};
}

int eval_det2d(const Settings& s, const fs::path& pred_path, const fs::path& gt_path,
               const fs::path& out) {
  const double thr = s.real("iou-thr", 0.5);
  const std::string interp_name = s.text("interp", "all-points");
  ApInterpolation interp;
  if (interp_name == "all-points") interp = ApInterpolation::AllPoints;
  else if (interp_name == "101") interp = ApInterpolation::Points101;
  else throw UsageError("--interp must be all-points or 101");

  const auto pred = io::parse_detections(io::read_text(pred_path));
  const auto gt = io::parse_detections(io::read_text(gt_path));
  const ApResult r = average_precision(pred.records, gt.records, thr, interp);
  const double range = ap_range(pred.records, gt.records, interp);
  const GroupAp groups = average_precision_by_group(pred.records, gt.records,
                                                    default_class_grouping(), interp);
  Json ap50 = Json::object(), ap5095 = Json::object();
  for (const auto& [k, v] : groups.ap50) ap50[k] = v;
  for (const auto& [k, v] : groups.ap50_95) ap5095[k] = v;

  Json report{{"task", "det2d"},
              {"iou_threshold", thr},
              {"interpolation", interp_name},
              {"class_agnostic", ap_json(r)},
              {"ap_50_95", range},
              {"groups", Json{{"ap50", ap50},
                              {"ap50_95", ap5095},
                              {"macro_ap50", groups.macro_ap50},
                              {"macro_ap50_95", groups.macro_ap50_95}}}};
  io::write_text_atomic(out, io::dump(report, 2) + "\n");
  return kExitOk;
}

int eval_mot(const Settings& s, const fs::path& pred_path, const fs::path& gt_path,
             const fs::path& out) {
  const std::string kind = s.text("gate", "iou");
  MotGate gate;
  if (kind == "iou") gate = MotGate::iou(s.real("gate-value", 0.5));
  else if (kind == "bev") gate = MotGate::bev_distance(s.real("gate-value", 2.0));
  else throw UsageError("--gate must be iou or bev");

  const auto pred = io::parse_detections(io::read_text(pred_path));
  const auto gt = io::parse_detections(io::read_text(gt_path));
  const auto [pf, gf] = align_frames(pred.records, gt.records);
  const MotResult r = clear_mot(pf, gf, gate);
  Json report{{"task", "mot"},
              {"gate", kind},
              {"gate_value", gate.value},
              {"frames", gf.size()},
              {"mota", r.mota},
              {"motp", r.motp},
              {"gt_total", r.gt_total},
              {"matches", r.matches},
              {"fn", r.fn},
              {"fp", r.fp},
              {"idsw", r.idsw}};
  io::write_text_atomic(out, io::dump(report, 2) + "\n");
  return kExitOk;
}

int eval_mask(const fs::path& pred_path, const fs::path& gt_path, const fs::path& out) {
  const BinaryRaster pred = io::parse_pgm(io::read_text(pred_path));
  const BinaryRaster gt = io::parse_pgm(io::read_text(gt_path));
  const MaskScores m = mask_prf(pred, gt);
  Json report{{"task", "mask"},          {"iou", m.iou},
              {"precision", m.precision}, {"recall", m.recall},
              {"f_measure", m.f_measure}, {"both_empty", m.both_empty}};
  io::write_text_atomic(out, io::dump(report, 2) + "\n");
  return kExitOk;
}

int eval_flatness(const Settings& s, const fs::path& traj_path, const fs::path& out) {
  FlatnessThresholds thr;
  thr.even = s.real("even-threshold", thr.even);
  thr.uneven = s.real("uneven-threshold", thr.uneven);
  if (!(thr.uneven <= thr.even)) throw UsageError("--uneven-threshold must not exceed --even-threshold");
  const auto samples = io::parse_trajectory_csv(io::read_text(traj_path));
  const FlatnessProfile p = flatness_profile(samples, thr);
  Json report{{"task", "flatness"},
              {"samples", p.samples.size()},
              {"slope", p.slope},
              {"intercept", p.intercept},
              {"r_squared", p.r_squared},
              {"zero_variance", p.zero_variance},
              {"label", std::string(to_string(p.label))},
              {"thresholds", Json{{"even", thr.even}, {"uneven", thr.uneven}}}};
  io::write_text_atomic(out, io::dump(report, 2) + "\n");
  return kExitOk;
}

int eval(const Settings& s) {
  const std::string task = require(s, "task");
  const fs::path out = require(s, "out");
  if (task == "flatness") {
    // One input: the surveyed trajectory, passed as --gt (or --pred).
    auto traj = s.text("gt");
    if (!traj) traj = s.text("pred");
    if (!traj) throw UsageError("flatness needs --gt <trajectory.csv>");
    return eval_flatness(s, *traj, out);
  }
  const fs::path pred = require(s, "pred");
  const fs::path gt = require(s, "gt");
  if (task == "distance") return eval_distance(s, pred, gt, out);
  if (task == "det2d") return eval_det2d(s, pred, gt, out);
  if (task == "mot") return eval_mot(s, pred, gt, out);
  if (task == "mask") return eval_mask(pred, gt, out);
  throw UsageError("--task must be one of distance, det2d, mot, mask, flatness");
}

// ---------------------------------------------------------------------------

int synth(const Settings& s) {
  const Preset preset = [&] {
    try {
      return parse_preset(s.text("preset", "even"));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }();
  const auto seed = static_cast<std::uint64_t>(s.integer("seed", 0));
  const fs::path dir = require(s, "out-dir");
  const auto cloud_points = s.integer("cloud-points", 20000);
  if (cloud_points < 3) throw UsageError("--cloud-points must be at least 3");

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  const SyntheticScene scene = make_scene(preset_options(preset, seed));
  const RenderedContacts rendered = render_contacts(scene);

  io::CalibrationFile calib;
  calib.cameras.push_back({scene.camera_id, scene.camera});
  calib.extrinsics.push_back(camera_ego_to_optical(scene.camera_id));
  calib.extrinsics.push_back(scene.camera_to_road);
  calib.extrinsics.push_back(scene.lidar_to_road);
  calib.extrinsics.push_back(scene.road_to_map());

  const io::DetectionHeader header{FrameId::camera_optical(scene.camera_id).to_string(), "map"};
  const auto observed = contacts_to_detections(scene, rendered.contacts, false);
  const auto exact = contacts_to_detections(scene, rendered.contacts, true);
  std::vector<Json> truth;
  for (const auto& c : rendered.contacts) {
    truth.push_back(Json{{"gt_distance", c.gt_distance},
                         {"gt_ground_distance", c.gt_ground_distance},
                         {"gt_point", Json::array({c.gt_point.x(), c.gt_point.y(), c.gt_point.z()})},
                         {"gt_ground", Json::array({c.gt_ground.x(), c.gt_ground.y()})}});
  }

  Json scene_json = io::scene_to_json(scene, to_string(preset));
  Json omitted = Json::array();
  for (const auto& o : rendered.omitted) {
    omitted.push_back(Json{{"target", o.target_index}, {"reason", std::string(to_string(o.reason))}});
  }
  scene_json["omitted"] = omitted;

  const PointCloud cloud =
      render_ground_cloud(scene, static_cast<std::size_t>(cloud_points), 0.02, 0.1);

  io::write_text_atomic(dir / "scene.json", io::dump(scene_json, 2) + "\n");
  io::write_text_atomic(dir / "calibration.json", io::serialize_calibration(calib));
  io::write_text_atomic(dir / "detections.jsonl", io::serialize_detections(header, observed));
  io::write_text_atomic(dir / "ground_truth.jsonl", io::serialize_detections(header, exact, truth));
  io::write_text_atomic(dir / "cloud.xyz", io::serialize_point_cloud_text(cloud));
  io::write_text_atomic(dir / "control_points.csv",
                        io::serialize_control_points_csv(render_control_points(scene, 8)));
  io::write_text_atomic(dir / "trajectory.csv",
                        io::serialize_trajectory_csv(render_trajectory(scene)));
  io::write_text_atomic(dir / "vanishing_lines.csv",
                        io::serialize_lines_csv(render_lane_lines(scene)));

  std::cout << "preset " << to_string(preset) << "\n"
            << "height_m " << io::format_real(scene.height) << "\n"
            << "alpha_rad " << io::format_real(scene.alpha) << "\n"
            << "gamma_rad " << io::format_real(scene.gamma) << "\n"
            << "contacts " << rendered.contacts.size() << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Roadside monocular distance estimation, calibration and evaluation"};
  app.name("curb");
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file [env CURB_CONFIG]");

  auto cal = std::make_unique<Command>();
  cal->app = app.add_subcommand("calibrate-lidar-base", "Fit the ground under a LiDAR");
  cal->option("cloud", "point cloud (.bin float32 xyzi, or text xyz[i])");
  cal->option("ransac-iters", "RANSAC hypotheses", "200");
  cal->option("tol", "inlier distance, meters", "0.05");
  cal->option("seed", "RANSAC seed", "0");
  cal->option("min-inlier-ratio", "reject fits below this inlier ratio", "0.5");
  cal->option("sensor-id", "LiDAR id used in frame names", "lidar0");
  cal->option("out", "calibration JSON to create or update");

  auto est = std::make_unique<Command>();
  est->app = app.add_subcommand("estimate", "Distance of detections from the camera");
  est->option("method", "p3d or ipm", "p3d");
  est->option("calib", "calibration JSON");
  est->option("camera-id", "camera id in the calibration", "cam0");
  est->option("detections", "detection JSON-lines");
  est->option("height", "camera height above the road, meters (p3d)");
  est->option("alpha", "camera pitch, radians (p3d)");
  est->option("vanishing-lines", "CSV u1,v1,u2,v2 of road-parallel lines (p3d)");
  est->option("gamma", "camera roll, radians (p3d)", "0");
  est->option("control-points", "CSV u,v,gx,gz (ipm)");
  est->option("out", "estimation JSON-lines");

  auto ev = std::make_unique<Command>();
  ev->app = app.add_subcommand("eval", "Metric reports");
  ev->option("task", "distance, det2d, mot, mask or flatness");
  ev->option("pred", "predictions");
  ev->option("gt", "ground truth");
  ev->option("out", "report JSON");
  ev->option("bins-out", "per-bin CSV for the distance task", "<out>.bins.csv");
  ev->option("bin-width", "distance bin width, meters", "10");
  ev->option("scenario", "even, partially-even or uneven", "even");
  ev->option("method", "p3d or ipm; picks the distance definition", "from estimates");
  ev->option("iou-thr", "det2d IoU threshold", "0.5");
  ev->option("interp", "det2d AP interpolation: all-points or 101", "all-points");
  ev->option("gate", "mot gate: iou or bev", "iou");
  ev->option("gate-value", "min IoU, or max BEV center distance in meters", "0.5 / 2.0");
  ev->option("even-threshold", "flatness R2 at or above which a scene is even", "0.9");
  ev->option("uneven-threshold", "flatness R2 below which a scene is uneven", "0.6");

  auto syn = std::make_unique<Command>();
  syn->app = app.add_subcommand("synth", "Write a synthetic scene and its ground truth");
  syn->option("preset", "even, partially-even or uneven", "even");
  syn->option("seed", "scene seed", "0");
  syn->option("out-dir", "output directory");
  syn->option("cloud-points", "LiDAR ground returns", "20000");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (config_path.empty()) {
      if (auto v = Settings::process_env("CURB_CONFIG")) config_path = *v;
    }
    Json config;
    if (!config_path.empty()) {
      try {
        config = Json::parse(io::read_text(config_path));
      } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::Schema, "config " + config_path + ": " + e.what());
      }
    }
    for (Command* c : {cal.get(), est.get(), ev.get(), syn.get()}) {
      if (!c->app->parsed()) continue;
      const Settings settings(c->given(), config, c->app->get_name());
      if (c == cal.get()) return calibrate_lidar_base(settings);
      if (c == est.get()) return estimate(settings);
      if (c == ev.get()) return eval(settings);
      return synth(settings);
    }
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace curb::cli
