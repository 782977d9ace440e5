#include "curb/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curb/error.hpp"

namespace curb {

namespace {

constexpr std::uint64_t kStreamHeight = 1;
constexpr std::uint64_t kStreamTargets = 2;
constexpr std::uint64_t kStreamContactNoise = 3;
constexpr std::uint64_t kStreamCloud = 4;
constexpr std::uint64_t kStreamControl = 5;
constexpr std::uint64_t kStreamTrajectory = 6;
constexpr std::uint64_t kStreamPose = 7;

constexpr double kMinHeight = 2.5;
constexpr double kMaxHeight = 6.5;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct ClassShape {
  ObjectClass cls;
  double weight;
  double l, w, h;
};

constexpr ClassShape kShapes[] = {
    {ObjectClass::Car, 0.50, 4.5, 1.8, 1.5},
    {ObjectClass::Bus, 0.10, 11.0, 2.5, 3.2},
    {ObjectClass::Cyclist, 0.15, 1.8, 0.6, 1.7},
    {ObjectClass::Pedestrian, 0.20, 0.6, 0.6, 1.75},
    {ObjectClass::Other, 0.05, 3.0, 1.5, 1.5},
};

const ClassShape& shape_of(ObjectClass cls) {
  for (const auto& s : kShapes) {
    if (s.cls == cls) return s;
  }
  return kShapes[0];
}

double deg(double d) { return d * std::numbers::pi / 180.0; }

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

// ---------------------------------------------------------------------------
// RoadProfile

std::size_t RoadProfile::segment(double z) const {
  std::size_t k = 0;
  while (k < breaks.size() && z >= breaks[k].z) ++k;
  return k;
}

double RoadProfile::grade(double z) const {
  const std::size_t k = segment(z);
  return k == 0 ? 0.0 : breaks[k - 1].grade;
}

double RoadProfile::altitude(double z) const {
  double alt = 0.0;
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    if (z <= breaks[k].z) break;
    const double end = k + 1 < breaks.size() ? std::min(z, breaks[k + 1].z) : z;
    alt += breaks[k].grade * (end - breaks[k].z);
  }
  return alt;
}

// ---------------------------------------------------------------------------
// Scene

CameraModel SceneOptions::default_camera() {
  CameraModel cam;
  cam.fx = 1400.0;
  cam.fy = 1400.0;
  cam.cx = 960.0;
  cam.cy = 540.0;
  cam.width = 1920;
  cam.height = 1080;
  return cam;
}

Vector3 SyntheticScene::road_point(const Vector2& ground_xz) const {
  return {ground_xz.x(), -profile.altitude(ground_xz.y()), ground_xz.y()};
}

Vector3 SyntheticScene::road_to_camera(const Vector3& road) const {
  return camera_to_road.rotation().transpose() * (road - camera_to_road.translation());
}

GroundPlane SyntheticScene::lidar_ground_plane(std::size_t index) const {
  // Segment plane in road coordinates: y' + g z' + a = 0.
  const double g = index == 0 ? 0.0 : profile.breaks[index - 1].grade;
  const double z0 = index == 0 ? 0.0 : profile.breaks[index - 1].z;
  const double a = profile.altitude(z0) - g * z0;
  const Vector3 m(0.0, 1.0, g);
  const Matrix3& r = lidar_to_road.rotation();
  const Vector3& t = lidar_to_road.translation();
  GroundPlane plane(r.transpose() * m, m.dot(t) + a, FrameId::lidar_ego(lidar_id));
  if (plane.d < 0.0) {
    plane.normal = -plane.normal;
    plane.d = -plane.d;
  }
  return plane;
}

P3DConfig SyntheticScene::p3d_config() const {
  P3DConfig cfg;
  cfg.camera = camera;
  cfg.height = height;
  cfg.alpha = alpha;
  cfg.gamma = gamma;
  return cfg;
}

RigidTransform SyntheticScene::road_to_map() const {
  Matrix3 r;
  r << 1, 0, 0,
       0, 0, 1,
       0, -1, 0;
  return {r, Vector3::Zero(), FrameId::road(camera_id), FrameId::map()};
}

SyntheticScene make_scene(const SceneOptions& options) {
  options.camera.validate();
  if (options.height && !(*options.height > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "camera height must be positive");
  }
  constexpr double half_pi = std::numbers::pi / 2;
  if (!(std::abs(options.alpha) < half_pi) || !(std::abs(options.gamma) < half_pi)) {
    throw Error(ErrorCode::InvalidArgument, "pitch and roll must lie in (-pi/2, pi/2)");
  }
  if (!(options.range_min > 0.0) || !(options.range_max > options.range_min) ||
      !(options.lateral_half_width >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "target range must satisfy 0 < min < max");
  }
  for (std::size_t k = 0; k < options.plane_breaks.size(); ++k) {
    const auto& b = options.plane_breaks[k];
    if (!(b.z > 0.0) || !std::isfinite(b.grade) ||
        (k > 0 && !(b.z > options.plane_breaks[k - 1].z))) {
      throw Error(ErrorCode::InvalidArgument, "plane breaks need increasing positive z");
    }
  }

  SyntheticScene scene{.camera = options.camera,
                       .camera_id = options.camera_id,
                       .lidar_id = options.lidar_id,
                       .camera_to_road = RigidTransform::identity(FrameId::map()),
                       .lidar_to_road = RigidTransform::identity(FrameId::map()),
                       .profile = {},
                       .ground = {},
                       .targets = {},
                       .noise = {}};
  if (options.height) {
    scene.height = *options.height;
  } else {
    auto rng = make_stream(options.seed, kStreamHeight);
    scene.height = std::uniform_real_distribution<double>(kMinHeight, kMaxHeight)(rng);
  }
  scene.alpha = options.alpha;
  scene.gamma = options.gamma;
  scene.profile.breaks = options.plane_breaks;
  scene.noise = options.noise;
  scene.seed = options.seed;
  scene.base_grade = options.base_grade;
  scene.range_min = options.range_min;
  scene.range_max = options.range_max;

  const FrameId optical = FrameId::camera_optical(options.camera_id);
  const FrameId road = FrameId::road(options.camera_id);
  scene.camera_to_road = RigidTransform(rotation_from_pitch_roll(scene.alpha, scene.gamma),
                                        Vector3(0.0, -scene.height, 0.0), optical, road);

  // LiDAR axes in road coordinates: x forward (z'), y left (−x'), z up (−y').
  Matrix3 nominal;
  nominal.col(0) = Vector3::UnitZ();
  nominal.col(1) = -Vector3::UnitX();
  nominal.col(2) = -Vector3::UnitY();
  const Matrix3 tilt = rotation_about_y(options.lidar_pitch) * rotation_about_x(options.lidar_roll);
  scene.lidar_to_road =
      RigidTransform(nominal * tilt, Vector3(0.0, -(scene.height + options.lidar_mount_offset), 0.0),
                     FrameId::lidar_ego(options.lidar_id), road);

  const Matrix3& r = scene.camera_to_road.rotation();
  const Vector3& t = scene.camera_to_road.translation();
  for (std::size_t k = 0; k <= scene.profile.breaks.size(); ++k) {
    const double g = k == 0 ? 0.0 : scene.profile.breaks[k - 1].grade;
    const double z0 = k == 0 ? 0.0 : scene.profile.breaks[k - 1].z;
    const double a = scene.profile.altitude(z0) - g * z0;
    const Vector3 m(0.0, 1.0, g);
    scene.ground.emplace_back(r.transpose() * m, m.dot(t) + a, optical);
  }

  auto rng = make_stream(options.seed, kStreamTargets);
  std::uniform_real_distribution<double> range(options.range_min, options.range_max);
  std::uniform_real_distribution<double> lateral(-options.lateral_half_width,
                                                 options.lateral_half_width);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  scene.targets.reserve(options.n_targets);
  for (std::size_t i = 0; i < options.n_targets; ++i) {
    const double z = range(rng);
    const double x = lateral(rng);
    double pick = unit(rng);
    ObjectClass cls = ObjectClass::Other;
    for (const auto& s : kShapes) {
      if (pick < s.weight) {
        cls = s.cls;
        break;
      }
      pick -= s.weight;
    }
    scene.targets.push_back({Vector2(x, z), cls});
  }
  return scene;
}

SyntheticScene make_scene(double height, double alpha, double gamma,
                          std::vector<PlaneBreak> plane_breaks, std::size_t n_targets,
                          std::uint64_t seed) {
  SceneOptions options;
  options.camera = SceneOptions::default_camera();
  options.height = height;
  options.alpha = alpha;
  options.gamma = gamma;
  options.plane_breaks = std::move(plane_breaks);
  options.n_targets = n_targets;
  options.seed = seed;
  return make_scene(options);
}

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::Even: return "even";
    case Preset::PartiallyEven: return "partially-even";
    case Preset::Uneven: return "uneven";
  }
  return "even";
}

Preset parse_preset(std::string_view text) {
  if (text == "even") return Preset::Even;
  if (text == "partially-even") return Preset::PartiallyEven;
  if (text == "uneven") return Preset::Uneven;
  throw Error(ErrorCode::InvalidArgument, "unknown preset '" + std::string(text) + "'");
}

SceneOptions preset_options(Preset preset, std::uint64_t seed) {
  SceneOptions options;
  options.camera = SceneOptions::default_camera();
  options.camera.k1 = -0.05;
  options.camera.k2 = 0.01;
  options.seed = seed;
  options.n_targets = 200;
  options.noise = {0.5, 1.0};

  auto rng = make_stream(seed, kStreamHeight);
  const double height = std::uniform_real_distribution<double>(kMinHeight, kMaxHeight)(rng);
  options.height = height;
  // Tilt down (negative pitch) so the optical axis meets the ground near 25 m.
  auto pose_rng = make_stream(seed, kStreamPose);
  options.alpha = -std::atan(height / 25.0) +
                  std::uniform_real_distribution<double>(-deg(1.0), deg(1.0))(pose_rng);
  options.lidar_pitch = std::uniform_real_distribution<double>(-deg(2.0), deg(2.0))(pose_rng);
  options.lidar_roll = std::uniform_real_distribution<double>(-deg(2.0), deg(2.0))(pose_rng);

  switch (preset) {
    case Preset::Even:
      options.base_grade = 0.02;
      break;
    case Preset::PartiallyEven:
      options.base_grade = 0.02;
      options.plane_breaks = {{45.0, -0.018}};
      break;
    case Preset::Uneven:
      options.base_grade = 0.0;
      options.plane_breaks = {{35.0, 0.05}, {65.0, -0.03}};
      break;
  }
  return options;
}

// ---------------------------------------------------------------------------
// Rendering

std::string_view to_string(OmitReason reason) {
  switch (reason) {
    case OmitReason::BehindCamera: return "behind_camera";
    case OmitReason::AtOrAboveHorizon: return "at_or_above_horizon";
    case OmitReason::OutOfImage: return "out_of_image";
  }
  return "unknown";
}

RenderedContacts render_contacts(const SyntheticScene& scene) {
  RenderedContacts out;
  const CameraModel& cam = scene.camera;
  const P3DConfig cfg = scene.p3d_config();
  auto rng = make_stream(scene.seed, kStreamContactNoise);
  std::normal_distribution<double> noise(0.0, 1.0);

  for (std::size_t i = 0; i < scene.targets.size(); ++i) {
    const SceneTarget& target = scene.targets[i];
    // One draw pair per target, consumed even when the target is omitted, so
    // noise for a given target does not depend on its neighbours.
    const double nu = noise(rng), nv = noise(rng);

    const Vector3 road = scene.road_point(target.ground);
    const Vector3 q = scene.road_to_camera(road);
    if (!(q.z() > 0.0)) {
      out.omitted.push_back({i, OmitReason::BehindCamera});
      continue;
    }
    const PixelPoint ideal = project(cam, q, Distortion::Ignore);
    const double denom = -cam.fy * std::sin(cfg.alpha) + (ideal.v - cam.cy) * std::cos(cfg.alpha);
    if (!(denom > cfg.epsilon)) {
      out.omitted.push_back({i, OmitReason::AtOrAboveHorizon});
      continue;
    }
    const PixelPoint exact = cam.has_distortion() ? project(cam, q, Distortion::Apply) : ideal;
    if (!cam.contains(exact)) {
      out.omitted.push_back({i, OmitReason::OutOfImage});
      continue;
    }

    RenderedContact rc;
    rc.target_index = i;
    rc.bbox_id = "t" + std::to_string(i);
    rc.class_name = target.class_name;
    rc.exact_pixel = exact;
    rc.contact.pixel = {exact.u + scene.noise.pixel_sigma * nu,
                        exact.v + scene.noise.pixel_sigma * nv};
    rc.contact.source_bbox_id = rc.bbox_id;
    rc.gt_point = q;
    rc.gt_distance = q.norm();
    rc.gt_ground = target.ground;
    rc.gt_ground_distance = target.ground.norm();

    const ClassShape& shape = shape_of(target.class_name);
    const double half_w = 0.5 * cam.fx * shape.w / q.z();
    const double box_h = cam.fy * shape.h / q.z();
    rc.bbox = {rc.contact.pixel.u - half_w, rc.contact.pixel.v - box_h,
               rc.contact.pixel.u + half_w, rc.contact.pixel.v};
    out.contacts.push_back(std::move(rc));
  }
  return out;
}

PointCloud render_ground_cloud(const SyntheticScene& scene, std::size_t n_points,
                               double noise_sigma, double outlier_rate, double max_radius) {
  if (n_points < 3) throw Error(ErrorCode::InvalidArgument, "cloud needs at least three points");
  if (!(outlier_rate >= 0.0 && outlier_rate <= 1.0) || !(noise_sigma >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "noise must be non-negative, outlier rate in [0, 1]");
  }
  auto rng = make_stream(scene.seed, kStreamCloud);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> outlier_height(0.15, 2.5);
  const RigidTransform road_to_lidar = invert(scene.lidar_to_road);
  constexpr double min_radius = 2.0;

  PointCloud cloud;
  cloud.points.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    // Uniform over the annulus.
    const double r = std::sqrt(min_radius * min_radius +
                               unit(rng) * (max_radius * max_radius - min_radius * min_radius));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    const Vector2 ground(r * std::cos(theta), r * std::sin(theta));
    Vector3 p = scene.road_point(ground);
    // Upward unit normal of the local segment in road coordinates (y' is down).
    const Vector3 up = Vector3(0.0, -1.0, -scene.profile.grade(ground.y())).normalized();
    const bool outlier = unit(rng) < outlier_rate;
    const double offset = outlier ? outlier_height(rng) : noise_sigma * gauss(rng);
    p += offset * up;
    cloud.points.push_back(road_to_lidar.apply(p));
  }
  return cloud;
}

std::vector<GroundCorrespondence> render_control_points(const SyntheticScene& scene,
                                                        std::size_t count, double z_min,
                                                        double z_max, double lateral) {
  auto rng = make_stream(scene.seed, kStreamControl);
  std::uniform_real_distribution<double> zs(z_min, z_max), xs(-lateral, lateral);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<GroundCorrespondence> out;
  for (std::size_t attempt = 0; out.size() < count && attempt < 100 * count + 100; ++attempt) {
    const Vector2 ground(xs(rng), zs(rng));
    const double nu = gauss(rng), nv = gauss(rng);
    const Vector3 q = scene.road_to_camera(scene.road_point(ground));
    if (!(q.z() > 0.0)) continue;
    const PixelPoint px = project(scene.camera, q, Distortion::Apply);
    if (!scene.camera.contains(px)) continue;
    out.push_back({{px.u + scene.noise.control_point_sigma * nu,
                    px.v + scene.noise.control_point_sigma * nv},
                   ground});
  }
  if (out.size() < count) {
    throw Error(ErrorCode::InsufficientData, "could not place the requested control points in view");
  }
  return out;
}

std::vector<TrajectorySample> render_trajectory(const SyntheticScene& scene, double spacing,
                                                double altitude_sigma, double lane_offset) {
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "spacing must be positive");
  auto rng = make_stream(scene.seed, kStreamTrajectory);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<TrajectorySample> out;
  const auto steps = static_cast<std::size_t>(std::floor((scene.range_max - scene.range_min) / spacing));
  for (std::size_t k = 0; k <= steps; ++k) {
    const double z = scene.range_max - static_cast<double>(k) * spacing;
    const double alt = scene.base_grade * z + scene.profile.altitude(z) + altitude_sigma * gauss(rng);
    out.push_back({0.1 * static_cast<double>(k), lane_offset, z, alt});
  }
  return out;
}

std::vector<ImageLine> render_lane_lines(const SyntheticScene& scene, double half_lane,
                                         double z_near, double z_far) {
  std::vector<ImageLine> lines;
  for (double x : {-half_lane, half_lane}) {
    const Vector3 a = scene.road_to_camera(Vector3(x, 0.0, z_near));
    const Vector3 b = scene.road_to_camera(Vector3(x, 0.0, z_far));
    lines.push_back({project(scene.camera, a, Distortion::Apply),
                     project(scene.camera, b, Distortion::Apply)});
  }
  return lines;
}

std::vector<DetectionRecord> contacts_to_detections(const SyntheticScene& scene,
                                                    std::span<const RenderedContact> contacts,
                                                    bool exact_boxes) {
  std::vector<DetectionRecord> out;
  out.reserve(contacts.size());
  for (const RenderedContact& c : contacts) {
    DetectionRecord r;
    r.frame_id = 0;
    r.sensor_id = scene.camera_id;
    r.class_name = c.class_name;
    r.score = 1.0;
    r.track_id = static_cast<std::int64_t>(c.target_index);
    r.bbox_id = c.bbox_id;
    if (exact_boxes) {
      const double du = c.exact_pixel.u - c.contact.pixel.u;
      const double dv = c.exact_pixel.v - c.contact.pixel.v;
      r.bbox2d = BoundingBox2D{c.bbox.u1 + du, c.bbox.v1 + dv, c.bbox.u2 + du, c.bbox.v2 + dv};
    } else {
      r.bbox2d = c.bbox;
    }
    const ClassShape& shape = shape_of(c.class_name);
    const double alt = scene.profile.altitude(c.gt_ground.y());
    r.box3d = Box3D{Vector3(c.gt_ground.x(), c.gt_ground.y(), alt + 0.5 * shape.h), shape.l,
                    shape.w, shape.h, std::numbers::pi / 2};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace curb
