#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "curb/camera.hpp"
#include "curb/estimators.hpp"
#include "curb/frames.hpp"

namespace curb {

struct PointCloud {
  std::vector<Vector3> points;   // meters, LiDAR-ego frame
  std::vector<float> intensity;  // empty, or one value per point
};

struct RansacOptions {
  int iterations = 200;
  double inlier_tol = 0.05;        // meters
  double min_inlier_ratio = 0.5;
  std::uint64_t seed = 0;
};

struct PlaneFit {
  GroundPlane plane;
  std::vector<std::uint8_t> inlier_mask;  // 1 = inlier
  std::size_t inlier_count = 0;
  double rms = 0.0;  // point-to-plane RMS over inliers, meters

  double inlier_ratio() const {
    return inlier_mask.empty() ? 0.0
                               : static_cast<double>(inlier_count) /
                                     static_cast<double>(inlier_mask.size());
  }
};

/// RANSAC over 3-point samples, then a least-squares refit over the inliers.
/// The normal is oriented so the sensor origin sits on the positive side.
/// Hypotheses are scored by inlier count; ties keep the earliest hypothesis.
PlaneFit fit_ground_plane(const PointCloud& cloud, const RansacOptions& options = {},
                          const FrameId& frame = {});

/// LiDAR-ego → LiDAR-base: z along the plane normal, origin at the sensor's
/// foot point on the plane, x the sensor x-axis projected into the plane.
RigidTransform lidar_base_from_ground(const GroundPlane& plane, const std::string& lidar_id);

struct Correspondence2D3D {
  PixelPoint pixel;
  Vector3 world = Vector3::Zero();
};

struct RefineOptions {
  int max_iters = 100;
  double tol = 1e-12;  // stop when the relative cost decrease falls below this
  bool huber = false;
  double huber_delta_px = 3.0;
  Distortion distortion = Distortion::Apply;
};

struct RefineResult {
  RigidTransform pose;  // world → camera
  double rms_residual_px = 0.0;
  double initial_rms_px = 0.0;
  int iterations = 0;
};

/// Levenberg–Marquardt over the 6 pose parameters of `init` (world → camera),
/// minimizing squared pixel reprojection error.
RefineResult refine_extrinsic(const CameraModel& cam, const RigidTransform& init,
                              std::span<const Correspondence2D3D> corrs,
                              const RefineOptions& options = {});

/// RMS pixel residual of `pose` over `corrs`. Points behind the camera make it
/// infinite.
double reprojection_rms(const CameraModel& cam, const RigidTransform& pose,
                        std::span<const Correspondence2D3D> corrs,
                        Distortion distortion = Distortion::Apply);

}  // namespace curb
