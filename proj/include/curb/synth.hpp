#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curb/calib.hpp"
#include "curb/camera.hpp"
#include "curb/estimators.hpp"
#include "curb/frames.hpp"
#include "curb/metrics.hpp"

namespace curb {

/// Name recorded in scene metadata for the generator behind every stream.
inline constexpr std::string_view kSynthPrngName = "mt19937_64/splitmix64-streams";

/// Independent, reproducible generator for one purpose (targets, pixel noise,
/// cloud, ...) derived from the scene seed.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

/// From road z' = `z` onward the ground climbs `grade` meters per meter,
/// relative to the camera's local ground plane.
struct PlaneBreak {
  double z = 0.0;
  double grade = 0.0;
};

/// Piecewise-planar ground along the road z' axis. Altitude is measured
/// upward from the local plane under the camera (zero before the first break).
struct RoadProfile {
  std::vector<PlaneBreak> breaks;  // strictly increasing z, all > 0

  double altitude(double z) const;
  double grade(double z) const;
  /// Index of the planar segment containing z' (0 = local plane).
  std::size_t segment(double z) const;
};

struct SceneTarget {
  Vector2 ground = Vector2::Zero();  // (x', z') on the road, meters
  ObjectClass class_name = ObjectClass::Car;
};

struct SceneNoise {
  double pixel_sigma = 0.0;          // contact pixels, px
  double control_point_sigma = 0.0;  // IPM control pixels, px
};

struct SceneOptions {
  CameraModel camera;
  std::string camera_id = "cam0";
  std::string lidar_id = "lidar0";
  std::optional<double> height;  // meters; drawn from [2.5, 6.5] when empty
  double alpha = 0.0;
  double gamma = 0.0;
  std::vector<PlaneBreak> plane_breaks;
  std::size_t n_targets = 100;
  double range_min = 5.0;  // target z' range, meters
  double range_max = 100.0;
  double lateral_half_width = 8.0;  // target |x'| bound, meters
  SceneNoise noise;
  std::uint64_t seed = 0;
  double base_grade = 0.0;  // grade of the local plane in the map frame
  double lidar_mount_offset = 0.3;  // LiDAR sits this far above the camera
  double lidar_pitch = 0.0;         // LiDAR mounting tilt, radians
  double lidar_roll = 0.0;

  static CameraModel default_camera();
};

/// Camera, ground and targets. Road frame: origin at the pole foot, x' right,
/// y' down (normal to the local ground), z' forward; the camera sits at
/// (0, -height, 0) with camera→road rotation rotation_from_pitch_roll(α, γ).
struct SyntheticScene {
  CameraModel camera;
  std::string camera_id;
  std::string lidar_id;
  double height = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  RigidTransform camera_to_road;
  RigidTransform lidar_to_road;
  RoadProfile profile;
  std::vector<GroundPlane> ground;  // camera frame, one per profile segment
  std::vector<SceneTarget> targets;
  SceneNoise noise;
  std::uint64_t seed = 0;
  double base_grade = 0.0;
  double range_min = 0.0;
  double range_max = 0.0;

  /// Road-frame point on the ground at (x', z').
  Vector3 road_point(const Vector2& ground_xz) const;
  Vector3 road_to_camera(const Vector3& road) const;
  /// Plane of segment `index` in the LiDAR-ego frame.
  GroundPlane lidar_ground_plane(std::size_t index = 0) const;
  P3DConfig p3d_config() const;
  /// Road→map rotation: map x = x', map y = z', map z = −y'.
  RigidTransform road_to_map() const;
};

SyntheticScene make_scene(const SceneOptions& options);
SyntheticScene make_scene(double height, double alpha, double gamma,
                          std::vector<PlaneBreak> plane_breaks, std::size_t n_targets,
                          std::uint64_t seed);

enum class Preset { Even, PartiallyEven, Uneven };
std::string_view to_string(Preset preset);
Preset parse_preset(std::string_view text);

/// Options for the three flatness presets (plane breaks, grades, camera pose
/// drawn from the seed, 0.5 px contact noise, 1 px control-point noise).
SceneOptions preset_options(Preset preset, std::uint64_t seed);

enum class OmitReason { BehindCamera, AtOrAboveHorizon, OutOfImage };
std::string_view to_string(OmitReason reason);

struct RenderedContact {
  std::size_t target_index = 0;
  std::string bbox_id;
  ObjectClass class_name = ObjectClass::Car;
  ContactPoint contact;          // observed: distorted, plus noise
  PixelPoint exact_pixel;        // observed without noise
  BoundingBox2D bbox;            // box whose lower-edge midpoint is `contact`
  Vector3 gt_point = Vector3::Zero();  // camera frame
  double gt_distance = 0.0;            // |gt_point|
  double gt_ground_distance = 0.0;     // |(x', z')| from the pole foot
  Vector2 gt_ground = Vector2::Zero();
};

struct OmittedTarget {
  std::size_t target_index = 0;
  OmitReason reason = OmitReason::OutOfImage;
};

struct RenderedContacts {
  std::vector<RenderedContact> contacts;
  std::vector<OmittedTarget> omitted;
};

RenderedContacts render_contacts(const SyntheticScene& scene);

/// Ground returns in the LiDAR-ego frame within `max_radius` of the pole foot.
PointCloud render_ground_cloud(const SyntheticScene& scene, std::size_t n_points,
                               double noise_sigma, double outlier_rate,
                               double max_radius = 25.0);

/// Surveyed IPM control points on the road between z' in [z_min, z_max].
std::vector<GroundCorrespondence> render_control_points(const SyntheticScene& scene,
                                                        std::size_t count, double z_min = 8.0,
                                                        double z_max = 30.0,
                                                        double lateral = 4.0);

/// Survey vehicle driving from range_max toward the camera, map frame.
std::vector<TrajectorySample> render_trajectory(const SyntheticScene& scene, double spacing = 0.5,
                                                double altitude_sigma = 0.005,
                                                double lane_offset = 2.0);

/// Two lane edges parallel to z' on the local plane, as observed (distorted)
/// image segments.
std::vector<ImageLine> render_lane_lines(const SyntheticScene& scene, double half_lane = 1.75,
                                         double z_near = 10.0, double z_far = 30.0);

/// 2D + 3D detection records for the rendered contacts, frame 0.
std::vector<DetectionRecord> contacts_to_detections(const SyntheticScene& scene,
                                                    std::span<const RenderedContact> contacts,
                                                    bool exact_boxes);

}  // namespace curb
