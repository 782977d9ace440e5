#pragma once

#include <span>

#include "curb/frames.hpp"

namespace curb {

struct PixelPoint {
  double u = 0.0;
  double v = 0.0;

  bool operator==(const PixelPoint&) const = default;
};

struct ImageLine {
  PixelPoint p;
  PixelPoint q;
};

/// Pinhole intrinsics plus Brown distortion, in the usual
/// [fx, fy, cx, cy, k1, k2, p1, p2, k3] calibration order.
struct CameraModel {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double k3 = 0.0;
  int width = 1;
  int height = 1;

  /// Throws InvalidArgument unless fx, fy > 0 and the principal point lies
  /// inside the image.
  void validate() const;

  Matrix3 intrinsic_matrix() const;
  bool has_distortion() const;
  /// Closed bounds: 0 <= u <= width, 0 <= v <= height.
  bool contains(const PixelPoint& p) const;
};

enum class Distortion { Ignore, Apply };

/// Brown model on normalized coordinates: radial x(1 + k1 r² + k2 r⁴ + k3 r⁶)
/// plus tangential terms.
Vector2 distort_normalized(const CameraModel& cam, const Vector2& xy);

/// Jacobian of distort_normalized at xy.
Eigen::Matrix2d distort_normalized_jacobian(const CameraModel& cam, const Vector2& xy);

PixelPoint project(const CameraModel& cam, const Vector3& point_cam,
                   Distortion distortion = Distortion::Ignore);

/// Ideal pinhole pixel → pixel observed through the lens.
PixelPoint distort(const CameraModel& cam, const PixelPoint& ideal);

/// Observed pixel → ideal pinhole pixel. Newton iteration on normalized
/// coordinates, at most kUndistortMaxIterations steps, converged when the
/// step falls under kUndistortTolerance. Throws NonConvergence otherwise.
PixelPoint undistort(const CameraModel& cam, const PixelPoint& observed);

inline constexpr int kUndistortMaxIterations = 20;
inline constexpr double kUndistortTolerance = 1e-10;

/// Unit viewing ray through an ideal (undistorted) pixel.
Vector3 pixel_ray(const CameraModel& cam, const PixelPoint& ideal);

/// Least-squares point minimizing the summed squared perpendicular distance
/// to every line. Throws InsufficientData for < 2 lines and RankDeficient
/// when the lines are (numerically) all parallel.
PixelPoint vanishing_point(std::span<const ImageLine> lines);

/// alpha = atan((vp.v - cy) / fy).
double pitch_from_vanishing(const CameraModel& cam, const PixelPoint& vp);

/// Image row where the level-ground depth formula diverges:
/// cy + fy * tan(alpha).
double horizon_row(const CameraModel& cam, double alpha);

}  // namespace curb
