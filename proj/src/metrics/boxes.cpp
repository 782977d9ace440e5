#include <algorithm>
#include <cmath>

#include "curb/error.hpp"
#include "curb/metrics.hpp"

namespace curb {

std::string_view to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::Bus: return "Bus";
    case ObjectClass::Car: return "Car";
    case ObjectClass::Cyclist: return "Cyclist";
    case ObjectClass::Pedestrian: return "Pedestrian";
    case ObjectClass::Other: return "Other";
  }
  return "Other";
}

std::string_view to_string(MotionState m) {
  return m == MotionState::Moving ? "moving" : "static";
}

ObjectClass parse_object_class(std::string_view text) {
  for (auto c : {ObjectClass::Bus, ObjectClass::Car, ObjectClass::Cyclist,
                 ObjectClass::Pedestrian, ObjectClass::Other}) {
    if (text == to_string(c)) return c;
  }
  throw Error(ErrorCode::Schema, "unknown class_name '" + std::string(text) + "'");
}

MotionState parse_motion_state(std::string_view text) {
  if (text == "moving") return MotionState::Moving;
  if (text == "static") return MotionState::Static;
  throw Error(ErrorCode::Schema, "unknown motion_state '" + std::string(text) + "'");
}

void DetectionRecord::validate() const {
  if (!bbox2d && !box3d) {
    throw Error(ErrorCode::InvalidArgument, "record needs a 2D or a 3D box");
  }
  if (bbox2d && !(bbox2d->u1 < bbox2d->u2 && bbox2d->v1 < bbox2d->v2)) {
    throw Error(ErrorCode::InvalidArgument, "2D box needs u1 < u2 and v1 < v2");
  }
  if (box3d && !(box3d->l > 0.0 && box3d->w > 0.0 && box3d->h > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "3D box dimensions must be positive");
  }
  if (!(score >= 0.0 && score <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "score must lie in [0, 1]");
  }
}

double iou_2d(const BoundingBox2D& a, const BoundingBox2D& b) {
  const double iw = std::min(a.u2, b.u2) - std::max(a.u1, b.u1);
  const double ih = std::min(a.v2, b.v2) - std::max(a.v1, b.v1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = (a.u2 - a.u1) * (a.v2 - a.v1) + (b.u2 - b.u1) * (b.v2 - b.v1) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::array<Vector2, 4> bev_corners(const Box3D& box) {
  const double c = std::cos(box.yaw), s = std::sin(box.yaw);
  const Vector2 center(box.center.x(), box.center.y());
  const Vector2 ax(c * box.l / 2, s * box.l / 2);
  const Vector2 ay(-s * box.w / 2, c * box.w / 2);
  return {center + ax + ay, center - ax + ay, center - ax - ay, center + ax - ay};
}

namespace {

double polygon_area(std::span<const Vector2> poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vector2& p = poly[i];
    const Vector2& q = poly[(i + 1) % poly.size()];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

double cross(const Vector2& a, const Vector2& b, const Vector2& p) {
  return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
}

}  // namespace

double convex_intersection_area(std::span<const Vector2> subject, std::span<const Vector2> clip) {
  std::vector<Vector2> output(subject.begin(), subject.end());
  for (std::size_t i = 0; i < clip.size() && !output.empty(); ++i) {
    const Vector2& a = clip[i];
    const Vector2& b = clip[(i + 1) % clip.size()];
    std::vector<Vector2> input;
    input.swap(output);
    for (std::size_t j = 0; j < input.size(); ++j) {
      const Vector2& cur = input[j];
      const Vector2& prev = input[(j + input.size() - 1) % input.size()];
      const double dc = cross(a, b, cur), dp = cross(a, b, prev);
      if (dc >= 0.0) {
        if (dp < 0.0) output.push_back(prev + (cur - prev) * (dp / (dp - dc)));
        output.push_back(cur);
      } else if (dp >= 0.0) {
        output.push_back(prev + (cur - prev) * (dp / (dp - dc)));
      }
    }
  }
  return output.size() < 3 ? 0.0 : std::abs(polygon_area(output));
}

double iou_bev(const Box3D& a, const Box3D& b) {
  const auto ca = bev_corners(a), cb = bev_corners(b);
  const double inter = convex_intersection_area(ca, cb);
  const double uni = a.l * a.w + b.l * b.w - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

double iou_3d(const Box3D& a, const Box3D& b) {
  const auto ca = bev_corners(a), cb = bev_corners(b);
  const double inter_area = convex_intersection_area(ca, cb);
  const double top = std::min(a.center.z() + a.h / 2, b.center.z() + b.h / 2);
  const double bottom = std::max(a.center.z() - a.h / 2, b.center.z() - b.h / 2);
  const double inter = inter_area * std::max(0.0, top - bottom);
  const double uni = a.l * a.w * a.h + b.l * b.w * b.h - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

}  // namespace curb
