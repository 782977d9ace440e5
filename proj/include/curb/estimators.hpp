#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curb/camera.hpp"
#include "curb/frames.hpp"

namespace curb {

/// Plane n·Q + d = 0 with unit normal, expressed in `frame`.
struct GroundPlane {
  Vector3 normal = Vector3::UnitY();
  double d = 0.0;
  FrameId frame;

  GroundPlane() = default;
  /// Normalizes (normal, d) jointly. Throws InvalidArgument on a zero normal.
  GroundPlane(const Vector3& normal, double d, FrameId frame = {});

  /// Ground under a camera at height `height` with pitch alpha and roll gamma:
  /// normal is the second row of rotation_from_pitch_roll(alpha, gamma) and
  /// d = -height.
  static GroundPlane from_pitch_roll(double alpha, double gamma, double height,
                                     FrameId frame = {});

  double signed_distance(const Vector3& q) const { return normal.dot(q) + d; }
};

struct P3DConfig {
  CameraModel camera;
  double height = 1.0;  // camera height above ground, meters
  double alpha = 0.0;   // pitch, radians
  double gamma = 0.0;   // roll, radians; the depth formula assumes it is ~0
  double epsilon = 1e-9;

  void validate() const;
};

struct BoundingBox2D {
  double u1 = 0.0, v1 = 0.0, u2 = 0.0, v2 = 0.0;
};

struct ContactPoint {
  PixelPoint pixel;
  std::string source_bbox_id;
};

/// Midpoint of the box's lower edge.
ContactPoint contact_point(const BoundingBox2D& box, std::string bbox_id = {});

/// z = H·fy / (−fy·sin α + (v − cy)·cos α). Throws AtOrAboveHorizon when the
/// denominator is ≤ epsilon.
double p3d_depth(const P3DConfig& cfg, double v);

/// (x, y, z) = ((u − cx)·z/fx, (v − cy)·z/fy, z).
Vector3 p3d_backproject(const CameraModel& cam, const PixelPoint& p, double z);

/// Exact intersection of the pixel's viewing ray with an arbitrary plane in the
/// camera frame. Throws ParallelRay or BehindCamera.
Vector3 exact_ground_intersection(const CameraModel& cam, const GroundPlane& plane,
                                  const PixelPoint& p);

enum class SkipReason { OutOfBounds, AtOrAboveHorizon };
std::string_view to_string(SkipReason reason);

struct P3DEstimate {
  std::size_t index = 0;  // position in the input list
  std::string bbox_id;
  PixelPoint pixel;
  Vector3 point = Vector3::Zero();

  double distance() const { return point.norm(); }
};

struct P3DSkip {
  std::size_t index = 0;
  std::string bbox_id;
  SkipReason reason = SkipReason::OutOfBounds;
};

struct P3DBatchResult {
  std::vector<P3DEstimate> estimates;
  std::vector<P3DSkip> skipped;
};

/// Lifts every in-image, below-horizon contact point to a camera-frame 3D
/// point. Item failures are recorded in `skipped`, never thrown.
P3DBatchResult p3d_batch(const P3DConfig& cfg, std::span<const ContactPoint> contacts);

// ---------------------------------------------------------------------------
// Inverse perspective mapping baseline.

struct GroundCorrespondence {
  PixelPoint pixel;
  Vector2 ground = Vector2::Zero();  // meters on the ground plane
};

struct IpmFit {
  Matrix3 homography = Matrix3::Identity();  // homogeneous pixel → ground
  double rms_residual_m = 0.0;
  double max_residual_m = 0.0;
  double ground_side_sign = 1.0;  // sign of w for pixels that see the ground

  /// False for pixels on the far side of the homography's line at infinity,
  /// i.e. at or above the horizon.
  bool sees_ground(const PixelPoint& p) const;
};

/// Normalized DLT homography from ≥ 4 control points.
IpmFit ipm_fit(std::span<const GroundCorrespondence> correspondences);

/// Dehomogenized H·[u, v, 1]. Throws PointAtInfinity when w ≈ 0.
Vector2 ipm_map(const Matrix3& homography, const PixelPoint& p);

double ipm_distance(const Matrix3& homography, const PixelPoint& p,
                    const Vector2& camera_ground_xy);

}  // namespace curb
