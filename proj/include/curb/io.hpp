#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curb/calib.hpp"
#include "curb/camera.hpp"
#include "curb/frames.hpp"
#include "curb/metrics.hpp"
#include "curb/synth.hpp"

namespace curb::io {

using Json = nlohmann::ordered_json;

/// Decimal with 17 significant digits; "null" for non-finite values.
std::string format_real(double value);

/// Serializes JSON with every floating-point number through format_real.
/// indent < 0 produces a single line.
std::string dump(const Json& value, int indent = -1);

std::string read_text(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames over `path`.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

// ---------------------------------------------------------------------------
// Calibration JSON

struct NamedCamera {
  std::string id;
  CameraModel model;
};

struct CalibrationFile {
  std::vector<NamedCamera> cameras;
  std::vector<RigidTransform> extrinsics;
  std::vector<std::string> warnings;  // e.g. re-orthogonalized rotations

  const CameraModel& camera(std::string_view id) const;
  FrameGraph graph() const;
  /// Replaces an edge between the same (unordered) pair of frames, or appends.
  void upsert_extrinsic(const RigidTransform& edge);
};

/// Rotations farther than 1e-6 from orthonormal are a schema error; between
/// 1e-9 and 1e-6 they are projected back onto SO(3) with a warning.
CalibrationFile parse_calibration(std::string_view text);
std::string serialize_calibration(const CalibrationFile& calib);

// ---------------------------------------------------------------------------
// Detection JSON-lines

struct DetectionHeader {
  std::string frame;        // frame of 2D boxes, e.g. "camera-optical:cam0"
  std::string box3d_frame;  // frame of 3D boxes, e.g. "map"
};

struct DetectionFile {
  DetectionHeader header;
  std::vector<DetectionRecord> records;
  std::vector<Json> raw;  // the parsed JSON object of each record, for extra keys
};

/// Header line first, then one record per line. Errors carry the 1-based line
/// number. frame_id must be non-decreasing within each sensor.
DetectionFile parse_detections(std::string_view text);
std::string serialize_detections(const DetectionHeader& header,
                                 std::span<const DetectionRecord> records,
                                 std::span<const Json> extras = {});
Json record_to_json(const DetectionRecord& record);

// ---------------------------------------------------------------------------
// Estimation JSON-lines

struct EstimationRecord {
  std::string bbox_id;
  double u = 0.0, v = 0.0;
  std::optional<Vector3> point;
  std::optional<double> distance_m;
  std::string status = "ok";
  std::string method;
};

std::string serialize_estimations(std::span<const EstimationRecord> records);
std::vector<EstimationRecord> parse_estimations(std::string_view text);

// ---------------------------------------------------------------------------
// CSV

/// Numeric CSV with a required header row. Returns one vector per data row.
std::vector<std::vector<double>> parse_numeric_csv(std::string_view text,
                                                   std::span<const std::string_view> header);

std::vector<TrajectorySample> parse_trajectory_csv(std::string_view text);
std::string serialize_trajectory_csv(std::span<const TrajectorySample> samples);
std::vector<ImageLine> parse_lines_csv(std::string_view text);
std::string serialize_lines_csv(std::span<const ImageLine> lines);
std::vector<GroundCorrespondence> parse_control_points_csv(std::string_view text);
std::string serialize_control_points_csv(std::span<const GroundCorrespondence> points);
std::vector<Correspondence2D3D> parse_correspondences_csv(std::string_view text);

// ---------------------------------------------------------------------------
// Point clouds and rasters

/// ".bin" files hold float32 (x, y, z, intensity) records; anything else is
/// whitespace-separated text with 3 or 4 columns and '#' comments.
PointCloud read_point_cloud(const std::filesystem::path& path);
PointCloud parse_point_cloud_text(std::string_view text);
std::string serialize_point_cloud_text(const PointCloud& cloud);

/// Plain (P2) or raw (P5, 8-bit) PGM; non-zero pixels are set.
BinaryRaster parse_pgm(std::string_view bytes);
std::string serialize_pgm(const BinaryRaster& raster);

// ---------------------------------------------------------------------------
// Synthetic scene metadata

Json scene_to_json(const SyntheticScene& scene, std::string_view preset = {});

}  // namespace curb::io
