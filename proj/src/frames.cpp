#include "curb/frames.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <set>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "curb/error.hpp"

namespace curb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::AmbiguousPath: return "AmbiguousPath";
    case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::AtOrAboveHorizon: return "AtOrAboveHorizon";
    case ErrorCode::ParallelRay: return "ParallelRay";
    case ErrorCode::BehindCamera: return "BehindCamera";
    case ErrorCode::PointAtInfinity: return "PointAtInfinity";
    case ErrorCode::InlierRatioTooLow: return "InlierRatioTooLow";
    case ErrorCode::SensorNotAboveGround: return "SensorNotAboveGround";
    case ErrorCode::Divergence: return "Divergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FrameIndexing: return "FrameIndexing";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

struct KindName {
  FrameKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {FrameKind::CameraEgo, "camera-ego"},   {FrameKind::CameraOptical, "camera-optical"},
    {FrameKind::LidarEgo, "lidar-ego"},     {FrameKind::LidarBase, "lidar-base"},
    {FrameKind::Road, "road"},              {FrameKind::Map, "map"},
};

}  // namespace

FrameId FrameId::parse(std::string_view text) {
  if (text == "map") return map();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon + 1 == text.size()) {
    throw Error(ErrorCode::Schema, "malformed frame string '" + std::string(text) + "'");
  }
  const auto prefix = text.substr(0, colon);
  for (const auto& [kind, name] : kKindNames) {
    if (kind != FrameKind::Map && prefix == name) {
      return {kind, std::string(text.substr(colon + 1))};
    }
  }
  throw Error(ErrorCode::Schema, "unknown frame kind '" + std::string(prefix) + "'");
}

std::string FrameId::to_string() const {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) {
      return kind == FrameKind::Map ? std::string(name)
                                    : std::string(name) + ":" + sensor_id;
    }
  }
  return "?";
}

double orthonormality_error(const Matrix3& r) {
  const double gram = (r.transpose() * r - Matrix3::Identity()).norm();
  return std::max(gram, std::abs(r.determinant() - 1.0));
}

Matrix3 nearest_rotation(const Matrix3& m) {
  Eigen::JacobiSVD<Matrix3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3 d = Matrix3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

RigidTransform::RigidTransform(const Matrix3& rotation, const Vector3& translation,
                               FrameId from, FrameId to)
    : rotation_(rotation), translation_(translation), from_(std::move(from)),
      to_(std::move(to)) {
  if (!rotation_.allFinite() || !translation_.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "rigid transform has non-finite entries");
  }
  if (orthonormality_error(rotation_) > kOrthonormalTolerance) {
    throw Error(ErrorCode::InvalidArgument, "rotation is not orthonormal with det +1");
  }
}

RigidTransform RigidTransform::identity(const FrameId& frame) {
  return {Matrix3::Identity(), Vector3::Zero(), frame, frame};
}

Matrix4 RigidTransform::matrix() const {
  Matrix4 m = Matrix4::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  if (a.from_frame() != b.to_frame()) {
    throw Error(ErrorCode::FrameMismatch, "cannot compose " + a.from_frame().to_string() +
                                              "->" + a.to_frame().to_string() + " with " +
                                              b.from_frame().to_string() + "->" +
                                              b.to_frame().to_string());
  }
  return {a.rotation() * b.rotation(), a.rotation() * b.translation() + a.translation(),
          b.from_frame(), a.to_frame()};
}

RigidTransform invert(const RigidTransform& t) {
  const Matrix3 rt = t.rotation().transpose();
  return {rt, -rt * t.translation(), t.to_frame(), t.from_frame()};
}

Matrix3 rotation_about_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Matrix3 r;
  r << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return r;
}

Matrix3 rotation_about_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Matrix3 r;
  r << c, 0, s,
       0, 1, 0,
       -s, 0, c;
  return r;
}

Matrix3 rotation_about_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Matrix3 r;
  r << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return r;
}

Matrix3 rotation_from_pitch_roll(double alpha, double gamma) {
  return rotation_about_z(gamma) * rotation_about_x(alpha);
}

RigidTransform camera_ego_to_optical(const std::string& camera_id) {
  Matrix3 flip = Matrix3::Identity();
  flip(0, 0) = -1.0;
  flip(1, 1) = -1.0;
  return {flip, Vector3::Zero(), FrameId::camera_ego(camera_id),
          FrameId::camera_optical(camera_id)};
}

// ---------------------------------------------------------------------------
// FrameGraph

void FrameGraph::add_edge(const RigidTransform& edge) {
  const FrameId& a = edge.from_frame();
  const FrameId& b = edge.to_frame();
  if (a == b) {
    throw Error(ErrorCode::InvalidArgument, "self edge on " + a.to_string());
  }
  if (connected(a, b)) {
    throw Error(ErrorCode::AmbiguousPath, "frames " + a.to_string() + " and " +
                                              b.to_string() + " are already connected");
  }
  const std::size_t index = edges_.size();
  edges_.push_back(edge);
  adjacency_[a].push_back({b, index, true});
  adjacency_[b].push_back({a, index, false});
}

bool FrameGraph::contains(const FrameId& frame) const {
  return adjacency_.contains(frame);
}

std::vector<FrameId> FrameGraph::frames() const {
  std::vector<FrameId> out;
  out.reserve(adjacency_.size());
  for (const auto& [frame, links] : adjacency_) out.push_back(frame);
  return out;
}

bool FrameGraph::connected(const FrameId& a, const FrameId& b) const {
  if (a == b) return true;
  if (!contains(a) || !contains(b)) return false;
  try {
    path(a, b);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::vector<FrameGraph::Link> FrameGraph::path(const FrameId& from, const FrameId& to) const {
  // BFS; the graph is a forest so the first path found is the only one.
  std::map<FrameId, Link> came_from;
  std::set<FrameId> seen{from};
  std::deque<FrameId> queue{from};
  while (!queue.empty()) {
    const FrameId current = queue.front();
    queue.pop_front();
    if (current == to) break;
    const auto it = adjacency_.find(current);
    if (it == adjacency_.end()) continue;
    for (const Link& link : it->second) {
      if (seen.insert(link.neighbour).second) {
        came_from.emplace(link.neighbour, Link{current, link.edge, link.forward});
        queue.push_back(link.neighbour);
      }
    }
  }
  if (!seen.contains(to)) {
    throw Error(ErrorCode::NoPath,
                "no calibration path from " + from.to_string() + " to " + to.to_string());
  }
  // Walk back from `to`; each entry records the predecessor and the edge used.
  std::vector<Link> reversed;
  for (FrameId cur = to; cur != from;) {
    const Link& step = came_from.at(cur);
    reversed.push_back({cur, step.edge, step.forward});
    cur = step.neighbour;
  }
  return {reversed.rbegin(), reversed.rend()};
}

RigidTransform FrameGraph::lookup(const FrameId& from, const FrameId& to) const {
  if (from == to) return RigidTransform::identity(from);
  const auto steps = path(from, to);
  RigidTransform acc = RigidTransform::identity(from);
  for (const Link& step : steps) {
    const RigidTransform& e = edges_[step.edge];
    acc = compose(step.forward ? e : invert(e), acc);
  }
  if (steps.size() > kReorthogonalizeAfter) {
    acc = RigidTransform(nearest_rotation(acc.rotation()), acc.translation(), acc.from_frame(),
                         acc.to_frame());
  }
  return acc;
}

}  // namespace curb
