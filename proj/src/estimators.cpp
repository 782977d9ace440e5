#include "curb/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "curb/error.hpp"

namespace curb {

GroundPlane::GroundPlane(const Vector3& n, double offset, FrameId f)
    : normal(n), d(offset), frame(std::move(f)) {
  const double len = normal.norm();
  if (!(len > 0.0) || !std::isfinite(len) || !std::isfinite(d)) {
    throw Error(ErrorCode::InvalidArgument, "ground plane needs a finite non-zero normal");
  }
  normal /= len;
  d /= len;
}

GroundPlane GroundPlane::from_pitch_roll(double alpha, double gamma, double height,
                                         FrameId frame) {
  const Matrix3 r = rotation_from_pitch_roll(alpha, gamma);
  return GroundPlane(r.row(1).transpose(), -height, std::move(frame));
}

void P3DConfig::validate() const {
  camera.validate();
  if (!(height > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "camera height must be positive");
  }
  constexpr double half_pi = std::numbers::pi / 2;
  if (!(std::abs(alpha) < half_pi) || !(std::abs(gamma) < half_pi)) {
    throw Error(ErrorCode::InvalidArgument, "pitch and roll must lie in (-pi/2, pi/2)");
  }
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "denominator guard must be positive");
  }
}

ContactPoint contact_point(const BoundingBox2D& box, std::string bbox_id) {
  if (!(box.u1 < box.u2) || !(box.v1 < box.v2)) {
    throw Error(ErrorCode::Degenerate, "bounding box needs u1 < u2 and v1 < v2");
  }
  return {{0.5 * (box.u1 + box.u2), box.v2}, std::move(bbox_id)};
}

double p3d_depth(const P3DConfig& cfg, double v) {
  const double fy = cfg.camera.fy;
  const double denom = -fy * std::sin(cfg.alpha) + (v - cfg.camera.cy) * std::cos(cfg.alpha);
  if (!(denom > cfg.epsilon)) {
    throw Error(ErrorCode::AtOrAboveHorizon, "pixel row is at or above the horizon");
  }
  return cfg.height * fy / denom;
}

Vector3 p3d_backproject(const CameraModel& cam, const PixelPoint& p, double z) {
  if (!(z > 0.0)) {
    throw Error(ErrorCode::NonPositiveDepth, "back-projection depth must be positive");
  }
  return {(p.u - cam.cx) * z / cam.fx, (p.v - cam.cy) * z / cam.fy, z};
}

Vector3 exact_ground_intersection(const CameraModel& cam, const GroundPlane& plane,
                                  const PixelPoint& p) {
  const Vector3 ray = pixel_ray(cam, p);
  const double denom = plane.normal.dot(ray);
  if (std::abs(denom) < 1e-15) {
    throw Error(ErrorCode::ParallelRay, "viewing ray is parallel to the ground plane");
  }
  const double t = -plane.d / denom;
  if (!(t > 0.0)) {
    throw Error(ErrorCode::BehindCamera, "ground intersection lies behind the camera");
  }
  return t * ray;
}

std::string_view to_string(SkipReason reason) {
  switch (reason) {
    case SkipReason::OutOfBounds: return "out_of_bounds";
    case SkipReason::AtOrAboveHorizon: return "at_or_above_horizon";
  }
  return "unknown";
}

P3DBatchResult p3d_batch(const P3DConfig& cfg, std::span<const ContactPoint> contacts) {
  cfg.validate();
  P3DBatchResult result;
  result.estimates.reserve(contacts.size());
  for (std::size_t i = 0; i < contacts.size(); ++i) {
    const ContactPoint& c = contacts[i];
    if (!std::isfinite(c.pixel.u) || !std::isfinite(c.pixel.v) || !cfg.camera.contains(c.pixel)) {
      result.skipped.push_back({i, c.source_bbox_id, SkipReason::OutOfBounds});
      continue;
    }
    double z = 0.0;
    try {
      z = p3d_depth(cfg, c.pixel.v);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AtOrAboveHorizon) throw;
      result.skipped.push_back({i, c.source_bbox_id, SkipReason::AtOrAboveHorizon});
      continue;
    }
    const Vector3 q = p3d_backproject(cfg.camera, c.pixel, z);
    if (!q.allFinite()) {
      result.skipped.push_back({i, c.source_bbox_id, SkipReason::AtOrAboveHorizon});
      continue;
    }
    result.estimates.push_back({i, c.source_bbox_id, c.pixel, q});
  }
  return result;
}

// ---------------------------------------------------------------------------
// IPM

namespace {

// Hartley normalization: centroid to origin, mean distance sqrt(2).
Matrix3 normalizing_transform(std::span<const Vector2> pts) {
  Vector2 mean = Vector2::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  double spread = 0.0;
  for (const auto& p : pts) spread += (p - mean).norm();
  spread /= static_cast<double>(pts.size());
  if (!(spread > 0.0)) {
    throw Error(ErrorCode::RankDeficient, "control points coincide");
  }
  const double s = std::numbers::sqrt2 / spread;
  Matrix3 t;
  t << s, 0, -s * mean.x(),
       0, s, -s * mean.y(),
       0, 0, 1;
  return t;
}

bool collinear(const Vector2& a, const Vector2& b, const Vector2& c) {
  const Vector2 ab = b - a, ac = c - a;
  const double cross = ab.x() * ac.y() - ab.y() * ac.x();
  return std::abs(cross) <= 1e-12 * std::max(1.0, ab.squaredNorm() + ac.squaredNorm());
}

}  // namespace

IpmFit ipm_fit(std::span<const GroundCorrespondence> correspondences) {
  const std::size_t n = correspondences.size();
  if (n < 4) {
    throw Error(ErrorCode::InsufficientData, "homography needs at least four control points");
  }
  std::vector<Vector2> px(n), gd(n);
  for (std::size_t i = 0; i < n; ++i) {
    px[i] = {correspondences[i].pixel.u, correspondences[i].pixel.v};
    gd[i] = correspondences[i].ground;
    if (!px[i].allFinite() || !gd[i].allFinite()) {
      throw Error(ErrorCode::InvalidArgument, "control points must be finite");
    }
  }
  if (n == 4) {
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = a + 1; b < 4; ++b) {
        for (std::size_t c = b + 1; c < 4; ++c) {
          if (collinear(gd[a], gd[b], gd[c]) || collinear(px[a], px[b], px[c])) {
            throw Error(ErrorCode::RankDeficient, "three control points are collinear");
          }
        }
      }
    }
  }

  const Matrix3 tp = normalizing_transform(px);
  const Matrix3 tg = normalizing_transform(gd);
  Eigen::MatrixXd a(2 * n, 9);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector3 p = tp * px[i].homogeneous();
    const Vector3 g = tg * gd[i].homogeneous();
    const double x = g.x() / g.z(), y = g.y() / g.z();
    a.row(2 * i) << -p.x(), -p.y(), -p.z(), 0, 0, 0, x * p.x(), x * p.y(), x * p.z();
    a.row(2 * i + 1) << 0, 0, 0, -p.x(), -p.y(), -p.z(), y * p.x(), y * p.y(), y * p.z();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // The null space must be one-dimensional: the second-smallest singular
  // value (index 7) separates a unique solution from a family.
  if (sv.size() < 8 || !(sv(7) > 1e-10 * sv(0))) {
    throw Error(ErrorCode::RankDeficient, "control points do not determine a homography");
  }
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Matrix3 hn;
  hn << h(0), h(1), h(2),
        h(3), h(4), h(5),
        h(6), h(7), h(8);
  Matrix3 hmat = tg.inverse() * hn * tp;
  hmat /= hmat.norm();
  if (hmat(2, 2) < 0) hmat = -hmat;

  IpmFit fit;
  fit.homography = hmat;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (ipm_map(hmat, correspondences[i].pixel) - gd[i]).norm();
    sum_sq += r * r;
    fit.max_residual_m = std::max(fit.max_residual_m, r);
  }
  fit.rms_residual_m = std::sqrt(sum_sq / static_cast<double>(n));
  double w_sum = 0.0;
  for (const auto& p : px) w_sum += (hmat * p.homogeneous()).z();
  fit.ground_side_sign = w_sum < 0.0 ? -1.0 : 1.0;
  return fit;
}

bool IpmFit::sees_ground(const PixelPoint& p) const {
  const double w = (homography * Vector3(p.u, p.v, 1.0)).z();
  const double scale = homography.norm() * Vector3(p.u, p.v, 1.0).norm();
  return w * ground_side_sign > 1e-12 * scale;
}

Vector2 ipm_map(const Matrix3& homography, const PixelPoint& p) {
  const Vector3 g = homography * Vector3(p.u, p.v, 1.0);
  const double scale = homography.norm() * Vector3(p.u, p.v, 1.0).norm();
  if (!(std::abs(g.z()) > 1e-12 * scale)) {
    throw Error(ErrorCode::PointAtInfinity, "pixel maps to infinity on the ground plane");
  }
  return g.hnormalized();
}

double ipm_distance(const Matrix3& homography, const PixelPoint& p,
                    const Vector2& camera_ground_xy) {
  return (ipm_map(homography, p) - camera_ground_xy).norm();
}

}  // namespace curb
