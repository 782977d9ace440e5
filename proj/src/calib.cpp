#include "curb/calib.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "curb/error.hpp"

namespace curb {

namespace {

std::vector<std::uint8_t> classify(const PointCloud& cloud, const GroundPlane& plane,
                                   double tol, std::size_t& count) {
  std::vector<std::uint8_t> mask(cloud.points.size(), 0);
  count = 0;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    if (std::abs(plane.signed_distance(cloud.points[i])) <= tol) {
      mask[i] = 1;
      ++count;
    }
  }
  return mask;
}

// Total least squares plane through the masked points.
GroundPlane refit(const PointCloud& cloud, const std::vector<std::uint8_t>& mask,
                  const FrameId& frame) {
  Vector3 centroid = Vector3::Zero();
  std::size_t n = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      centroid += cloud.points[i];
      ++n;
    }
  }
  if (n < 3) throw Error(ErrorCode::Degenerate, "fewer than three inliers to refit");
  centroid /= static_cast<double>(n);
  Matrix3 cov = Matrix3::Zero();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      const Vector3 q = cloud.points[i] - centroid;
      cov += q * q.transpose();
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix3> eig(cov);
  const Vector3 ev = eig.eigenvalues();
  if (!(ev(1) > 1e-18 * std::max(1.0, ev(2)))) {
    throw Error(ErrorCode::Degenerate, "inlier points are collinear");
  }
  const Vector3 normal = eig.eigenvectors().col(0);
  return GroundPlane(normal, -normal.dot(centroid), frame);
}

GroundPlane oriented(GroundPlane plane) {
  if (plane.d < 0.0 || (plane.d == 0.0 && plane.normal.z() < 0.0)) {
    plane.normal = -plane.normal;
    plane.d = -plane.d;
  }
  return plane;
}

}  // namespace

PlaneFit fit_ground_plane(const PointCloud& cloud, const RansacOptions& options,
                          const FrameId& frame) {
  const std::size_t n = cloud.points.size();
  if (n < 3) throw Error(ErrorCode::InsufficientData, "plane fit needs at least three points");
  if (options.iterations <= 0 || !(options.inlier_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "RANSAC needs positive iterations and tolerance");
  }
  for (const Vector3& p : cloud.points) {
    if (!p.allFinite()) throw Error(ErrorCode::InvalidArgument, "point cloud has non-finite points");
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  bool found = false;
  GroundPlane best;
  std::size_t best_count = 0;
  for (int iter = 0; iter < options.iterations; ++iter) {
    std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
    if (a == b || b == c || a == c) continue;
    const Vector3 ab = cloud.points[b] - cloud.points[a];
    const Vector3 ac = cloud.points[c] - cloud.points[a];
    const Vector3 normal = ab.cross(ac);
    if (!(normal.norm() > 1e-12 * ab.norm() * ac.norm())) continue;
    const GroundPlane hypothesis(normal, -normal.dot(cloud.points[a]), frame);
    std::size_t count = 0;
    for (const Vector3& p : cloud.points) {
      if (std::abs(hypothesis.signed_distance(p)) <= options.inlier_tol) ++count;
    }
    if (!found || count > best_count) {
      found = true;
      best = hypothesis;
      best_count = count;
    }
  }
  if (!found) {
    throw Error(ErrorCode::Degenerate, "no non-degenerate 3-point sample; points are collinear");
  }

  // Least-squares refit and reclassify until the inlier set settles; the mask
  // reported is always the one measured against the returned plane.
  std::size_t count = 0;
  auto mask = classify(cloud, best, options.inlier_tol, count);
  GroundPlane plane = best;
  for (int round = 0; round < 10; ++round) {
    const GroundPlane candidate = refit(cloud, mask, frame);
    std::size_t next_count = 0;
    auto next = classify(cloud, candidate, options.inlier_tol, next_count);
    if (next_count < 3) break;
    plane = candidate;
    const bool stable = next == mask;
    mask = std::move(next);
    count = next_count;
    if (stable) break;
  }
  plane = oriented(plane);

  PlaneFit fit;
  fit.plane = plane;
  fit.inlier_mask = std::move(mask);
  fit.inlier_count = count;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (fit.inlier_mask[i]) {
      const double r = plane.signed_distance(cloud.points[i]);
      sum_sq += r * r;
    }
  }
  fit.rms = count > 0 ? std::sqrt(sum_sq / static_cast<double>(count)) : 0.0;
  if (fit.inlier_ratio() < options.min_inlier_ratio) {
    throw Error(ErrorCode::InlierRatioTooLow,
                "inlier ratio " + std::to_string(fit.inlier_ratio()) + " below floor " +
                    std::to_string(options.min_inlier_ratio));
  }
  return fit;
}

RigidTransform lidar_base_from_ground(const GroundPlane& plane, const std::string& lidar_id) {
  if (!(plane.d > 1e-9)) {
    throw Error(ErrorCode::SensorNotAboveGround,
                "sensor origin must lie strictly on the positive side of the ground plane");
  }
  const Vector3 z_axis = plane.normal;
  Vector3 x_axis = Vector3::UnitX() - Vector3::UnitX().dot(z_axis) * z_axis;
  if (!(x_axis.norm() > 1e-6)) {
    throw Error(ErrorCode::Degenerate, "sensor x-axis is parallel to the ground normal");
  }
  x_axis.normalize();
  const Vector3 y_axis = z_axis.cross(x_axis);
  Matrix3 r;
  r.row(0) = x_axis.transpose();
  r.row(1) = y_axis.transpose();
  r.row(2) = z_axis.transpose();
  // p_base = R (p_ego - o) with o = -d n, and R n = e_z.
  return {r, Vector3(0.0, 0.0, plane.d), FrameId::lidar_ego(lidar_id),
          FrameId::lidar_base(lidar_id)};
}

// ---------------------------------------------------------------------------
// Extrinsic refinement

namespace {

Matrix3 skew(const Vector3& w) {
  Matrix3 s;
  s << 0, -w.z(), w.y(),
       w.z(), 0, -w.x(),
       -w.y(), w.x(), 0;
  return s;
}

struct Evaluation {
  double cost = 0.0;          // robust cost
  double sum_sq = 0.0;        // plain squared pixel error
  Eigen::VectorXd residuals;  // 2N, weighted
  Eigen::MatrixXd jacobian;   // 2N × 6, weighted
};

// Returns false if any point falls behind the camera.
bool evaluate(const CameraModel& cam, const Matrix3& r, const Vector3& t,
              std::span<const Correspondence2D3D> corrs, const RefineOptions& opt,
              bool with_jacobian, Evaluation& out) {
  const std::size_t n = corrs.size();
  out.cost = 0.0;
  out.sum_sq = 0.0;
  out.residuals.resize(2 * static_cast<Eigen::Index>(n));
  if (with_jacobian) out.jacobian.resize(2 * static_cast<Eigen::Index>(n), 6);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector3 rotated = r * corrs[i].world;
    const Vector3 xc = rotated + t;
    if (!(xc.z() > 1e-9)) return false;
    const Vector2 xy(xc.x() / xc.z(), xc.y() / xc.z());
    const bool distorted = opt.distortion == Distortion::Apply && cam.has_distortion();
    const Vector2 d = distorted ? distort_normalized(cam, xy) : xy;
    const Vector2 res(cam.fx * d.x() + cam.cx - corrs[i].pixel.u,
                      cam.fy * d.y() + cam.cy - corrs[i].pixel.v);
    const double norm = res.norm();
    out.sum_sq += norm * norm;
    double weight = 1.0;
    if (opt.huber && norm > opt.huber_delta_px) {
      weight = opt.huber_delta_px / norm;
      out.cost += 2.0 * opt.huber_delta_px * norm - opt.huber_delta_px * opt.huber_delta_px;
    } else {
      out.cost += norm * norm;
    }
    const double sw = std::sqrt(weight);
    const auto row = 2 * static_cast<Eigen::Index>(i);
    out.residuals.segment<2>(row) = sw * res;
    if (with_jacobian) {
      Eigen::Matrix<double, 2, 3> dnorm;
      dnorm << 1.0 / xc.z(), 0.0, -xc.x() / (xc.z() * xc.z()),
               0.0, 1.0 / xc.z(), -xc.y() / (xc.z() * xc.z());
      const Eigen::Matrix2d ddist =
          distorted ? distort_normalized_jacobian(cam, xy) : Eigen::Matrix2d::Identity();
      const Eigen::Matrix2d focal = Eigen::Vector2d(cam.fx, cam.fy).asDiagonal();
      const Eigen::Matrix<double, 2, 3> dpix = focal * ddist * dnorm;
      // Left perturbation: R <- exp(w) R, t <- t + v.
      out.jacobian.block<2, 3>(row, 0) = sw * dpix * (-skew(rotated));
      out.jacobian.block<2, 3>(row, 3) = sw * dpix;
    }
  }
  return true;
}

Matrix3 exp_so3(const Vector3& w) {
  const double angle = w.norm();
  if (angle < 1e-300) return Matrix3::Identity();
  return Eigen::AngleAxisd(angle, w / angle).toRotationMatrix();
}

}  // namespace

double reprojection_rms(const CameraModel& cam, const RigidTransform& pose,
                        std::span<const Correspondence2D3D> corrs, Distortion distortion) {
  if (corrs.empty()) return 0.0;
  RefineOptions opt;
  opt.distortion = distortion;
  Evaluation ev;
  if (!evaluate(cam, pose.rotation(), pose.translation(), corrs, opt, false, ev)) {
    return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(ev.sum_sq / static_cast<double>(corrs.size()));
}

RefineResult refine_extrinsic(const CameraModel& cam, const RigidTransform& init,
                              std::span<const Correspondence2D3D> corrs,
                              const RefineOptions& options) {
  constexpr double kLambdaInit = 1e-3;
  constexpr double kLambdaCap = 1e8;

  cam.validate();
  if (corrs.size() < 4) {
    throw Error(ErrorCode::InsufficientData, "extrinsic refinement needs at least four correspondences");
  }
  const auto count = static_cast<double>(corrs.size());

  Matrix3 r = init.rotation();
  Vector3 t = init.translation();
  Evaluation current;
  if (!evaluate(cam, r, t, corrs, options, true, current)) {
    throw Error(ErrorCode::BehindCamera, "initial pose places correspondences behind the camera");
  }
  RefineResult result{init, std::sqrt(current.sum_sq / count),
                      std::sqrt(current.sum_sq / count), 0};

  {
    const Eigen::Matrix<double, 6, 6> h = current.jacobian.transpose() * current.jacobian;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> eig(h);
    if (!(eig.eigenvalues()(0) > 1e-12 * eig.eigenvalues()(5))) {
      throw Error(ErrorCode::Degenerate, "correspondences do not constrain all six pose parameters");
    }
  }

  double lambda = kLambdaInit;
  bool moved = false;
  Evaluation trial;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    result.iterations = iter + 1;
    if (current.cost == 0.0) break;
    const Eigen::Matrix<double, 6, 6> h = current.jacobian.transpose() * current.jacobian;
    const Eigen::Matrix<double, 6, 1> g = current.jacobian.transpose() * current.residuals;

    bool accepted = false;
    bool converged = false;
    while (!accepted) {
      Eigen::Matrix<double, 6, 6> damped = h;
      damped.diagonal() += lambda * h.diagonal();
      const Eigen::Matrix<double, 6, 1> step = damped.ldlt().solve(-g);
      // cost decrease the local quadratic model promises for this step
      const double predicted = -g.dot(step) - 0.5 * step.dot(h * step);
      const Matrix3 r_new = exp_so3(step.head<3>()) * r;
      const Vector3 t_new = t + step.tail<3>();
      if (step.allFinite() && evaluate(cam, r_new, t_new, corrs, options, true, trial) &&
          trial.cost < current.cost) {
        const double decrease = current.cost - trial.cost;
        converged = decrease <= options.tol * current.cost;
        r = r_new;
        t = t_new;
        std::swap(current, trial);
        moved = true;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
      } else {
        lambda *= 10.0;
        if (lambda > kLambdaCap) {
          // If the model's promise is below what rounding in the residuals can
          // resolve we are sitting on the minimum; otherwise it is diverging.
          if (predicted > 1e-10 * current.cost + 1e-20 * count) {
            throw Error(ErrorCode::Divergence,
                        "reprojection cost increases even at the damping cap");
          }
          converged = true;
          break;
        }
      }
    }
    if (converged) break;
  }

  if (moved) {
    result.pose = RigidTransform(nearest_rotation(r), t, init.from_frame(), init.to_frame());
    result.rms_residual_px = reprojection_rms(cam, result.pose, corrs, options.distortion);
  }
  return result;
}

}  // namespace curb
