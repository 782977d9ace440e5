#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curb/estimators.hpp"
#include "curb/frames.hpp"

namespace curb {

// ---------------------------------------------------------------------------
// Records

enum class ObjectClass { Bus, Car, Cyclist, Pedestrian, Other };
enum class MotionState { Moving, Static };

std::string_view to_string(ObjectClass c);
std::string_view to_string(MotionState m);
ObjectClass parse_object_class(std::string_view text);
MotionState parse_motion_state(std::string_view text);

struct Box3D {
  Vector3 center = Vector3::Zero();  // meters; z is up
  double l = 0.0, w = 0.0, h = 0.0;  // length along heading, width, height
  double yaw = 0.0;                  // radians about z
};

struct DetectionRecord {
  std::int64_t frame_id = 0;
  std::string sensor_id;
  ObjectClass class_name = ObjectClass::Car;
  std::optional<BoundingBox2D> bbox2d;
  std::optional<Box3D> box3d;
  double score = 1.0;
  std::optional<std::int64_t> track_id;
  std::optional<MotionState> motion_state;
  std::string bbox_id;  // optional free-form key linking estimates to truth

  /// Throws InvalidArgument when neither box is present, a box is degenerate,
  /// or the score leaves [0, 1].
  void validate() const;
};

// ---------------------------------------------------------------------------
// Overlap

double iou_2d(const BoundingBox2D& a, const BoundingBox2D& b);
/// Rotated-rectangle IoU in the x-y plane.
double iou_bev(const Box3D& a, const Box3D& b);
/// BEV intersection area × height overlap, over the union volume.
double iou_3d(const Box3D& a, const Box3D& b);

/// Convex polygon intersection area (Sutherland–Hodgman clip), counter-clockwise
/// input.
double convex_intersection_area(std::span<const Vector2> subject, std::span<const Vector2> clip);
std::array<Vector2, 4> bev_corners(const Box3D& box);

// ---------------------------------------------------------------------------
// Assignment

/// Minimum-cost assignment for a rows × cols cost matrix (row-major). Entries
/// that are +inf are forbidden. Returns, per row, the assigned column or -1.
std::vector<int> solve_assignment(const std::vector<double>& cost, std::size_t rows,
                                  std::size_t cols);

// ---------------------------------------------------------------------------
// Distance-error profile

enum class Scenario { Even, PartiallyEven, Uneven };
std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view text);

struct DistancePair {
  double gt = 0.0;    // meters
  double pred = 0.0;  // meters
};

struct DistanceBin {
  double range_lo = 0.0;
  double range_hi = 0.0;
  std::optional<double> mean_abs_error;  // empty for unpopulated bins
  std::size_t count = 0;
};

struct DistanceErrorProfile {
  std::vector<DistanceBin> bins;
  std::string method_name;
  Scenario scenario = Scenario::Even;

  std::size_t total_count() const;
  /// Mean absolute error over every pair.
  std::optional<double> overall_mae() const;
};

/// Bins [0, w), [w, 2w), ... up to the bin holding the largest ground truth.
DistanceErrorProfile distance_error_profile(std::span<const DistancePair> pairs, double bin_width,
                                            std::string method_name = {},
                                            Scenario scenario = Scenario::Even);

// ---------------------------------------------------------------------------
// Detection AP

enum class ApInterpolation {
  AllPoints,   // exact area under the monotone precision envelope
  Points101,   // COCO-style sampling at recall 0, 0.01, ..., 1
};

struct ApResult {
  double ap = 0.0;
  double precision = 0.0;  // at the full detection list
  double recall = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t num_gt = 0;
  bool empty_gt = false;  // set when there was no ground truth at all
};

/// Score-sorted greedy matching (each GT used once, IoU ≥ threshold) within
/// each frame, then the area under the interpolated PR curve. All records are
/// assumed to be one class; use average_precision_by_group for class splits.
ApResult average_precision(std::span<const DetectionRecord> dets,
                           std::span<const DetectionRecord> gts, double iou_threshold,
                           ApInterpolation interpolation = ApInterpolation::AllPoints);

/// 0.50, 0.55, ..., 0.95 computed as k/100 so 0.60 is exactly 0.6.
std::vector<double> default_iou_thresholds();

double ap_range(std::span<const DetectionRecord> dets, std::span<const DetectionRecord> gts,
                std::span<const double> thresholds,
                ApInterpolation interpolation = ApInterpolation::AllPoints);
double ap_range(std::span<const DetectionRecord> dets, std::span<const DetectionRecord> gts,
                ApInterpolation interpolation = ApInterpolation::AllPoints);

/// Class grouping used in reports: Bus, Car and Other collapse to "Veh".
using ClassGrouping = std::map<ObjectClass, std::string>;
ClassGrouping default_class_grouping();

struct GroupAp {
  std::map<std::string, double> ap50;
  std::map<std::string, double> ap50_95;
  double macro_ap50 = 0.0;
  double macro_ap50_95 = 0.0;
};

/// Per-group AP; groups with no ground truth are left out of the macro mean.
GroupAp average_precision_by_group(std::span<const DetectionRecord> dets,
                                   std::span<const DetectionRecord> gts,
                                   const ClassGrouping& grouping = default_class_grouping(),
                                   ApInterpolation interpolation = ApInterpolation::AllPoints);

// ---------------------------------------------------------------------------
// CLEAR-MOT

struct MotGate {
  enum class Kind { Iou2D, BevCenterDistance };
  Kind kind = Kind::Iou2D;
  double value = 0.5;  // minimum IoU, or maximum BEV center distance in meters

  static MotGate iou(double min_iou = 0.5) { return {Kind::Iou2D, min_iou}; }
  static MotGate bev_distance(double max_m = 2.0) { return {Kind::BevCenterDistance, max_m}; }
};

struct MotResult {
  double mota = 1.0;
  double motp = 0.0;  // mean overlap of matched pairs; 0 when nothing matched
  std::size_t gt_total = 0;
  std::size_t matches = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  std::size_t idsw = 0;
};

using Frames = std::vector<std::vector<DetectionRecord>>;

/// Aligns two record lists into frame-indexed sequences over the union of
/// frame ids (ascending). Throws FrameIndexing when a list is not sorted by
/// frame_id.
std::pair<Frames, Frames> align_frames(std::span<const DetectionRecord> pred,
                                       std::span<const DetectionRecord> gt);

/// Frame-aligned sequences (pred[k] and gt[k] describe the same frame).
MotResult clear_mot(const Frames& pred, const Frames& gt, const MotGate& gate);

// ---------------------------------------------------------------------------
// Masks

struct BinaryRaster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, non-zero = set

  BinaryRaster() = default;
  BinaryRaster(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, 0) {}
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct MaskScores {
  double iou = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  bool both_empty = false;  // all scores set to 1 by convention
};

MaskScores mask_prf(const BinaryRaster& pred, const BinaryRaster& gt);

// ---------------------------------------------------------------------------
// Ground flatness

struct TrajectorySample {
  double t = 0.0;
  double x = 0.0, y = 0.0, z = 0.0;  // map frame, meters
};

enum class FlatnessLabel { Even, PartiallyEven, Uneven };
std::string_view to_string(FlatnessLabel label);

struct FlatnessThresholds {
  double even = 0.9;    // R² at or above → Even
  double uneven = 0.6;  // R² below → Uneven
};

struct FlatnessProfile {
  std::vector<std::pair<double, double>> samples;  // (arc length s, altitude z)
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  bool zero_variance = false;  // altitude constant; R² defined as 1
  FlatnessLabel label = FlatnessLabel::Even;
};

FlatnessProfile flatness_profile(std::span<const TrajectorySample> samples,
                                 const FlatnessThresholds& thresholds = {});

}  // namespace curb
