#include "curb/camera.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "curb/error.hpp"

namespace curb {

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "image size must be positive");
  }
  if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height)) {
    throw Error(ErrorCode::InvalidArgument, "principal point outside the image");
  }
  for (double c : {k1, k2, k3, p1, p2}) {
    if (!std::isfinite(c)) {
      throw Error(ErrorCode::InvalidArgument, "distortion coefficients must be finite");
    }
  }
}

Matrix3 CameraModel::intrinsic_matrix() const {
  Matrix3 k;
  k << fx, 0, cx,
       0, fy, cy,
       0, 0, 1;
  return k;
}

bool CameraModel::has_distortion() const {
  return k1 != 0.0 || k2 != 0.0 || k3 != 0.0 || p1 != 0.0 || p2 != 0.0;
}

bool CameraModel::contains(const PixelPoint& p) const {
  return p.u >= 0.0 && p.u <= width && p.v >= 0.0 && p.v <= height;
}

Vector2 distort_normalized(const CameraModel& cam, const Vector2& xy) {
  const double x = xy.x(), y = xy.y();
  const double r2 = x * x + y * y;
  const double radial = 1.0 + r2 * (cam.k1 + r2 * (cam.k2 + r2 * cam.k3));
  return {x * radial + 2.0 * cam.p1 * x * y + cam.p2 * (r2 + 2.0 * x * x),
          y * radial + cam.p1 * (r2 + 2.0 * y * y) + 2.0 * cam.p2 * x * y};
}

Eigen::Matrix2d distort_normalized_jacobian(const CameraModel& cam, const Vector2& xy) {
  const double x = xy.x(), y = xy.y();
  const double r2 = x * x + y * y;
  const double radial = 1.0 + r2 * (cam.k1 + r2 * (cam.k2 + r2 * cam.k3));
  // d(radial)/d(r2)
  const double dradial = cam.k1 + r2 * (2.0 * cam.k2 + 3.0 * r2 * cam.k3);
  Eigen::Matrix2d j;
  j(0, 0) = radial + 2.0 * x * x * dradial + 2.0 * cam.p1 * y + 6.0 * cam.p2 * x;
  j(0, 1) = 2.0 * x * y * dradial + 2.0 * cam.p1 * x + 2.0 * cam.p2 * y;
  j(1, 0) = 2.0 * x * y * dradial + 2.0 * cam.p1 * x + 2.0 * cam.p2 * y;
  j(1, 1) = radial + 2.0 * y * y * dradial + 6.0 * cam.p1 * y + 2.0 * cam.p2 * x;
  return j;
}

PixelPoint project(const CameraModel& cam, const Vector3& point_cam, Distortion distortion) {
  if (!(point_cam.z() > 0.0)) {
    throw Error(ErrorCode::NonPositiveDepth, "cannot project a point at non-positive depth");
  }
  Vector2 xy(point_cam.x() / point_cam.z(), point_cam.y() / point_cam.z());
  if (distortion == Distortion::Apply) xy = distort_normalized(cam, xy);
  return {cam.fx * xy.x() + cam.cx, cam.fy * xy.y() + cam.cy};
}

PixelPoint distort(const CameraModel& cam, const PixelPoint& ideal) {
  const Vector2 xy((ideal.u - cam.cx) / cam.fx, (ideal.v - cam.cy) / cam.fy);
  const Vector2 d = distort_normalized(cam, xy);
  return {cam.fx * d.x() + cam.cx, cam.fy * d.y() + cam.cy};
}

PixelPoint undistort(const CameraModel& cam, const PixelPoint& observed) {
  if (!std::isfinite(observed.u) || !std::isfinite(observed.v)) {
    throw Error(ErrorCode::InvalidArgument, "pixel must be finite");
  }
  if (!cam.has_distortion()) return observed;

  const Vector2 target((observed.u - cam.cx) / cam.fx, (observed.v - cam.cy) / cam.fy);
  Vector2 xy = target;
  for (int iter = 0; iter < kUndistortMaxIterations; ++iter) {
    const Vector2 residual = distort_normalized(cam, xy) - target;
    const Eigen::Matrix2d j = distort_normalized_jacobian(cam, xy);
    const Vector2 step = j.partialPivLu().solve(residual);
    if (!step.allFinite()) break;
    xy -= step;
    if (step.norm() < kUndistortTolerance) {
      // A root past the fold of the radial polynomial is not the lens's preimage.
      const Eigen::Matrix2d jac = distort_normalized_jacobian(cam, xy);
      if (!(jac.determinant() > 0.0 && jac.trace() > 0.0)) break;
      return {cam.fx * xy.x() + cam.cx, cam.fy * xy.y() + cam.cy};
    }
  }
  throw Error(ErrorCode::NonConvergence, "undistortion did not converge");
}

Vector3 pixel_ray(const CameraModel& cam, const PixelPoint& ideal) {
  return Vector3((ideal.u - cam.cx) / cam.fx, (ideal.v - cam.cy) / cam.fy, 1.0).normalized();
}

PixelPoint vanishing_point(std::span<const ImageLine> lines) {
  if (lines.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "vanishing point needs at least two lines");
  }
  // Each line as a·u + b·v + c = 0 with (a, b) unit, so the residual is the
  // perpendicular distance. Solve the 2×2 normal equations.
  Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
  Vector2 atc = Vector2::Zero();
  for (const ImageLine& line : lines) {
    const Vector2 p(line.p.u, line.p.v), q(line.q.u, line.q.v);
    const Vector2 dir = q - p;
    const double len = dir.norm();
    if (!(len > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "image line endpoints coincide");
    }
    const Vector2 n(-dir.y() / len, dir.x() / len);
    const double c = -n.dot(p);
    ata += n * n.transpose();
    atc += n * c;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(ata);
  const double lo = eig.eigenvalues()(0), hi = eig.eigenvalues()(1);
  if (!(lo > 1e-12 * hi)) {
    throw Error(ErrorCode::RankDeficient, "image lines are parallel; no finite intersection");
  }
  const Vector2 x = ata.ldlt().solve(-atc);
  return {x.x(), x.y()};
}

double pitch_from_vanishing(const CameraModel& cam, const PixelPoint& vp) {
  return std::atan((vp.v - cam.cy) / cam.fy);
}

double horizon_row(const CameraModel& cam, double alpha) {
  if (!(std::abs(alpha) < std::numbers::pi / 2)) {
    throw Error(ErrorCode::InvalidArgument, "pitch must lie in (-pi/2, pi/2)");
  }
  return cam.cy + cam.fy * std::tan(alpha);
}

}  // namespace curb
