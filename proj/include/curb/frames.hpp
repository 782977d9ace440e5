#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace curb {

using Vector2 = Eigen::Vector2d;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Matrix4 = Eigen::Matrix4d;

// CameraEgo follows the x-left camera convention; CameraOptical is the
// x-right / y-down / z-forward frame all pixel math runs in. The two are
// joined by camera_ego_to_optical().
enum class FrameKind { CameraEgo, CameraOptical, LidarEgo, LidarBase, Map, Road };

struct FrameId {
  FrameKind kind = FrameKind::Map;
  std::string sensor_id;

  static FrameId map() { return {FrameKind::Map, {}}; }
  static FrameId camera_ego(std::string id) { return {FrameKind::CameraEgo, std::move(id)}; }
  static FrameId camera_optical(std::string id) {
    return {FrameKind::CameraOptical, std::move(id)};
  }
  static FrameId lidar_ego(std::string id) { return {FrameKind::LidarEgo, std::move(id)}; }
  static FrameId lidar_base(std::string id) { return {FrameKind::LidarBase, std::move(id)}; }
  static FrameId road(std::string id) { return {FrameKind::Road, std::move(id)}; }

  /// "camera-ego:<id>", "camera-optical:<id>", "lidar-ego:<id>",
  /// "lidar-base:<id>", "road:<id>" or "map".
  static FrameId parse(std::string_view text);
  std::string to_string() const;

  auto operator<=>(const FrameId&) const = default;
};

/// Rotation + translation mapping points expressed in `from` into `to`:
/// p_to = R * p_from + t.
class RigidTransform {
 public:
  static constexpr double kOrthonormalTolerance = 1e-9;

  RigidTransform(const Matrix3& rotation, const Vector3& translation, FrameId from,
                 FrameId to);

  static RigidTransform identity(const FrameId& frame);

  const Matrix3& rotation() const { return rotation_; }
  const Vector3& translation() const { return translation_; }
  const FrameId& from_frame() const { return from_; }
  const FrameId& to_frame() const { return to_; }

  Vector3 apply(const Vector3& p) const { return rotation_ * p + translation_; }
  Matrix4 matrix() const;

 private:
  Matrix3 rotation_;
  Vector3 translation_;
  FrameId from_;
  FrameId to_;
};

/// a ∘ b: maps b.from_frame → a.to_frame. Requires a.from_frame == b.to_frame.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform invert(const RigidTransform& t);

/// R(gamma) * R(alpha): roll about z applied after pitch about x.
Matrix3 rotation_from_pitch_roll(double alpha, double gamma);

Matrix3 rotation_about_x(double angle);
Matrix3 rotation_about_y(double angle);
Matrix3 rotation_about_z(double angle);

/// Nearest rotation in the Frobenius sense (SVD projection).
Matrix3 nearest_rotation(const Matrix3& m);

/// max(|RᵀR − I|_F, |det R − 1|)
double orthonormality_error(const Matrix3& r);

/// Fixed 180° rotation about z between the x-left camera-ego frame and the
/// x-right optical frame of the same camera.
RigidTransform camera_ego_to_optical(const std::string& camera_id);

/// Tree of calibration edges. Inserting an edge that would create a second
/// path between two frames is rejected, so every lookup has one answer.
class FrameGraph {
 public:
  /// Chains longer than this are re-projected onto SO(3) after composing.
  static constexpr std::size_t kReorthogonalizeAfter = 8;

  void add_edge(const RigidTransform& edge);
  bool contains(const FrameId& frame) const;
  bool connected(const FrameId& a, const FrameId& b) const;
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<RigidTransform>& edges() const { return edges_; }
  std::vector<FrameId> frames() const;

  RigidTransform lookup(const FrameId& from, const FrameId& to) const;

 private:
  // frame -> list of (neighbour, index into edges_, edge points toward neighbour)
  struct Link {
    FrameId neighbour;
    std::size_t edge;
    bool forward;
  };
  std::vector<RigidTransform> edges_;
  std::map<FrameId, std::vector<Link>> adjacency_;

  std::vector<Link> path(const FrameId& from, const FrameId& to) const;
};

}  // namespace curb
