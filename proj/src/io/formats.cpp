#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <sstream>

#include "curb/error.hpp"
#include "curb/io.hpp"

namespace curb::io {

namespace {

[[noreturn]] void schema_error(const std::string& message) {
  throw Error(ErrorCode::Schema, message);
}

[[noreturn]] void line_error(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::Schema, "line " + std::to_string(line) + ": " + message);
}

double number(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    schema_error(where + ": missing or non-numeric '" + key + "'");
  }
  return it->get<double>();
}

std::int64_t integer(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    schema_error(where + ": missing or non-integer '" + key + "'");
  }
  return it->get<std::int64_t>();
}

std::string text(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    schema_error(where + ": missing or non-string '" + key + "'");
  }
  return it->get<std::string>();
}

std::string real17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Splits text into lines, keeping 1-based numbering; strips a trailing '\r'.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t line = 1, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(start, end - start);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    out.emplace_back(line, l);
    if (end == text.size()) break;
    start = end + 1;
    ++line;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view token, double& out) {
  const std::string s(trim(token));
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

// ---------------------------------------------------------------------------
// Calibration

const CameraModel& CalibrationFile::camera(std::string_view id) const {
  for (const auto& c : cameras) {
    if (c.id == id) return c.model;
  }
  throw Error(ErrorCode::InvalidArgument, "no camera with id '" + std::string(id) + "'");
}

FrameGraph CalibrationFile::graph() const {
  FrameGraph g;
  for (const auto& e : extrinsics) g.add_edge(e);
  return g;
}

void CalibrationFile::upsert_extrinsic(const RigidTransform& edge) {
  for (auto& e : extrinsics) {
    const bool same = e.from_frame() == edge.from_frame() && e.to_frame() == edge.to_frame();
    const bool flipped = e.from_frame() == edge.to_frame() && e.to_frame() == edge.from_frame();
    if (same || flipped) {
      e = edge;
      return;
    }
  }
  extrinsics.push_back(edge);
}

CalibrationFile parse_calibration(std::string_view content) {
  Json root;
  try {
    root = Json::parse(content);
  } catch (const Json::parse_error& e) {
    schema_error(std::string("calibration is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) schema_error("calibration root must be an object");
  CalibrationFile calib;
  if (const auto it = root.find("cameras"); it != root.end()) {
    if (!it->is_array()) schema_error("'cameras' must be an array");
    std::size_t index = 0;
    for (const auto& c : *it) {
      const std::string where = "cameras[" + std::to_string(index++) + "]";
      if (!c.is_object()) schema_error(where + " must be an object");
      NamedCamera nc;
      nc.id = text(c, "id", where);
      nc.model.fx = number(c, "fx", where);
      nc.model.fy = number(c, "fy", where);
      nc.model.cx = number(c, "cx", where);
      nc.model.cy = number(c, "cy", where);
      nc.model.k1 = number(c, "k1", where);
      nc.model.k2 = number(c, "k2", where);
      nc.model.p1 = number(c, "p1", where);
      nc.model.p2 = number(c, "p2", where);
      nc.model.k3 = number(c, "k3", where);
      nc.model.width = static_cast<int>(integer(c, "width", where));
      nc.model.height = static_cast<int>(integer(c, "height", where));
      try {
        nc.model.validate();
      } catch (const Error& e) {
        schema_error(where + ": " + e.what());
      }
      calib.cameras.push_back(std::move(nc));
    }
  }
  if (const auto it = root.find("extrinsics"); it != root.end()) {
    if (!it->is_array()) schema_error("'extrinsics' must be an array");
    std::size_t index = 0;
    for (const auto& e : *it) {
      const std::string where = "extrinsics[" + std::to_string(index++) + "]";
      if (!e.is_object()) schema_error(where + " must be an object");
      const FrameId from = FrameId::parse(text(e, "from", where));
      const FrameId to = FrameId::parse(text(e, "to", where));
      const auto rot = e.find("rotation");
      const auto tr = e.find("translation");
      if (rot == e.end() || !rot->is_array() || rot->size() != 9) {
        schema_error(where + ": 'rotation' must hold 9 numbers");
      }
      if (tr == e.end() || !tr->is_array() || tr->size() != 3) {
        schema_error(where + ": 'translation' must hold 3 numbers");
      }
      Matrix3 r;
      Vector3 t;
      for (int i = 0; i < 9; ++i) {
        if (!(*rot)[i].is_number()) schema_error(where + ": non-numeric rotation entry");
        r(i / 3, i % 3) = (*rot)[i].get<double>();
      }
      for (int i = 0; i < 3; ++i) {
        if (!(*tr)[i].is_number()) schema_error(where + ": non-numeric translation entry");
        t(i) = (*tr)[i].get<double>();
      }
      const double err = orthonormality_error(r);
      if (!(err <= 1e-6)) schema_error(where + ": rotation is not orthonormal");
      if (err > RigidTransform::kOrthonormalTolerance) {
        r = nearest_rotation(r);
        calib.warnings.push_back(where + ": rotation re-orthogonalized (error " + real17(err) + ")");
      }
      calib.extrinsics.emplace_back(r, t, from, to);
    }
  }
  try {
    calib.graph();
  } catch (const Error& e) {
    schema_error(std::string("extrinsics do not form a tree: ") + e.what());
  }
  return calib;
}

std::string serialize_calibration(const CalibrationFile& calib) {
  Json root = Json::object();
  Json cams = Json::array();
  for (const auto& c : calib.cameras) {
    const CameraModel& m = c.model;
    cams.push_back(Json{{"id", c.id}, {"fx", m.fx}, {"fy", m.fy}, {"cx", m.cx}, {"cy", m.cy},
                        {"k1", m.k1}, {"k2", m.k2}, {"p1", m.p1}, {"p2", m.p2}, {"k3", m.k3},
                        {"width", m.width}, {"height", m.height}});
  }
  Json edges = Json::array();
  for (const auto& e : calib.extrinsics) {
    Json rot = Json::array();
    for (int i = 0; i < 9; ++i) rot.push_back(e.rotation()(i / 3, i % 3));
    const Vector3& t = e.translation();
    edges.push_back(Json{{"from", e.from_frame().to_string()},
                         {"to", e.to_frame().to_string()},
                         {"rotation", rot},
                         {"translation", Json::array({t.x(), t.y(), t.z()})}});
  }
  root["cameras"] = cams;
  root["extrinsics"] = edges;
  return dump(root, 2) + "\n";
}

// ---------------------------------------------------------------------------
// Detections

Json record_to_json(const DetectionRecord& r) {
  Json j = Json::object();
  j["frame_id"] = r.frame_id;
  j["sensor_id"] = r.sensor_id;
  j["class_name"] = std::string(to_string(r.class_name));
  if (!r.bbox_id.empty()) j["bbox_id"] = r.bbox_id;
  if (r.bbox2d) j["bbox2d"] = Json::array({r.bbox2d->u1, r.bbox2d->v1, r.bbox2d->u2, r.bbox2d->v2});
  if (r.box3d) {
    const Box3D& b = *r.box3d;
    j["box3d"] = Json{{"x", b.center.x()}, {"y", b.center.y()}, {"z", b.center.z()},
                      {"l", b.l}, {"w", b.w}, {"h", b.h}, {"yaw", b.yaw}};
  }
  j["score"] = r.score;
  if (r.track_id) j["track_id"] = *r.track_id;
  if (r.motion_state) j["motion_state"] = std::string(to_string(*r.motion_state));
  return j;
}

namespace {

DetectionRecord record_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) schema_error(where + ": record must be an object");
  DetectionRecord r;
  r.frame_id = integer(j, "frame_id", where);
  r.sensor_id = text(j, "sensor_id", where);
  r.class_name = parse_object_class(text(j, "class_name", where));
  r.score = number(j, "score", where);
  if (const auto it = j.find("bbox_id"); it != j.end()) {
    if (!it->is_string()) schema_error(where + ": 'bbox_id' must be a string");
    r.bbox_id = it->get<std::string>();
  }
  if (const auto it = j.find("bbox2d"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 4) schema_error(where + ": 'bbox2d' must hold 4 numbers");
    for (const auto& v : *it) {
      if (!v.is_number()) schema_error(where + ": non-numeric bbox2d entry");
    }
    r.bbox2d = BoundingBox2D{(*it)[0].get<double>(), (*it)[1].get<double>(),
                             (*it)[2].get<double>(), (*it)[3].get<double>()};
  }
  if (const auto it = j.find("box3d"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) schema_error(where + ": 'box3d' must be an object");
    const std::string w3 = where + ".box3d";
    r.box3d = Box3D{Vector3(number(*it, "x", w3), number(*it, "y", w3), number(*it, "z", w3)),
                    number(*it, "l", w3), number(*it, "w", w3), number(*it, "h", w3),
                    number(*it, "yaw", w3)};
  }
  if (const auto it = j.find("track_id"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) schema_error(where + ": 'track_id' must be an integer");
    r.track_id = it->get<std::int64_t>();
  }
  if (const auto it = j.find("motion_state"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) schema_error(where + ": 'motion_state' must be a string");
    r.motion_state = parse_motion_state(it->get<std::string>());
  }
  try {
    r.validate();
  } catch (const Error& e) {
    schema_error(where + ": " + e.what());
  }
  return r;
}

}  // namespace

DetectionFile parse_detections(std::string_view content) {
  DetectionFile file;
  bool have_header = false;
  std::map<std::string, std::int64_t> last_frame;
  for (const auto& [line, raw_line] : lines_of(content)) {
    const std::string_view l = trim(raw_line);
    if (l.empty()) continue;
    Json j;
    try {
      j = Json::parse(l);
    } catch (const Json::parse_error&) {
      line_error(line, "not valid JSON");
    }
    if (!have_header) {
      if (!j.is_object() || !j.contains("header") || !j["header"].is_object()) {
        line_error(line, "first line must be a {\"header\": {...}} object");
      }
      const Json& h = j["header"];
      if (const auto it = h.find("frame"); it != h.end() && it->is_string()) {
        file.header.frame = it->get<std::string>();
      }
      if (const auto it = h.find("box3d_frame"); it != h.end() && it->is_string()) {
        file.header.box3d_frame = it->get<std::string>();
      }
      for (const auto& f : {file.header.frame, file.header.box3d_frame}) {
        if (!f.empty()) {
          try {
            FrameId::parse(f);
          } catch (const Error& e) {
            line_error(line, e.what());
          }
        }
      }
      have_header = true;
      continue;
    }
    DetectionRecord r;
    try {
      r = record_from_json(j, "record");
    } catch (const Error& e) {
      line_error(line, e.what());
    } catch (const Json::exception& e) {
      line_error(line, e.what());
    }
    auto [it, inserted] = last_frame.emplace(r.sensor_id, r.frame_id);
    if (!inserted) {
      if (r.frame_id < it->second) {
        line_error(line, "frame_id decreases within sensor '" + r.sensor_id + "'");
      }
      it->second = r.frame_id;
    }
    file.records.push_back(std::move(r));
    file.raw.push_back(std::move(j));
  }
  if (!have_header) schema_error("line 1: detection file has no header line");
  return file;
}

std::string serialize_detections(const DetectionHeader& header,
                                 std::span<const DetectionRecord> records,
                                 std::span<const Json> extras) {
  Json h = Json::object();
  if (!header.frame.empty()) h["frame"] = header.frame;
  if (!header.box3d_frame.empty()) h["box3d_frame"] = header.box3d_frame;
  std::string out = dump(Json{{"header", h}}) + "\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    Json j = record_to_json(records[i]);
    if (i < extras.size() && extras[i].is_object()) {
      for (const auto& [k, v] : extras[i].items()) j[k] = v;
    }
    out += dump(j) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Estimations

std::string serialize_estimations(std::span<const EstimationRecord> records) {
  std::string out;
  for (const auto& r : records) {
    Json j = Json::object();
    j["bbox_id"] = r.bbox_id;
    j["u"] = r.u;
    j["v"] = r.v;
    j["x"] = r.point ? Json(r.point->x()) : Json(nullptr);
    j["y"] = r.point ? Json(r.point->y()) : Json(nullptr);
    j["z"] = r.point ? Json(r.point->z()) : Json(nullptr);
    j["distance_m"] = r.distance_m ? Json(*r.distance_m) : Json(nullptr);
    j["status"] = r.status;
    if (!r.method.empty()) j["method"] = r.method;
    out += dump(j) + "\n";
  }
  return out;
}

std::vector<EstimationRecord> parse_estimations(std::string_view content) {
  std::vector<EstimationRecord> out;
  for (const auto& [line, raw_line] : lines_of(content)) {
    const std::string_view l = trim(raw_line);
    if (l.empty()) continue;
    Json j;
    try {
      j = Json::parse(l);
    } catch (const Json::parse_error&) {
      line_error(line, "not valid JSON");
    }
    try {
      EstimationRecord r;
      r.bbox_id = text(j, "bbox_id", "estimate");
      r.u = number(j, "u", "estimate");
      r.v = number(j, "v", "estimate");
      r.status = text(j, "status", "estimate");
      if (j.contains("method") && j["method"].is_string()) r.method = j["method"].get<std::string>();
      const bool has_point = j.contains("x") && j["x"].is_number();
      if (has_point) {
        r.point = Vector3(number(j, "x", "estimate"), number(j, "y", "estimate"),
                          number(j, "z", "estimate"));
      }
      if (j.contains("distance_m") && !j["distance_m"].is_null()) {
        r.distance_m = number(j, "distance_m", "estimate");
      }
      out.push_back(std::move(r));
    } catch (const Error& e) {
      line_error(line, e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

std::vector<std::vector<double>> parse_numeric_csv(std::string_view content,
                                                   std::span<const std::string_view> header) {
  std::vector<std::vector<double>> rows;
  bool have_header = false;
  for (const auto& [line, raw_line] : lines_of(content)) {
    const std::string_view l = trim(raw_line);
    if (l.empty()) continue;
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = l.find(',', start);
      cells.push_back(trim(l.substr(start, comma == std::string_view::npos ? l.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!have_header) {
      if (cells.size() != header.size() || !std::equal(cells.begin(), cells.end(), header.begin())) {
        std::string expected;
        for (const auto& h : header) expected += (expected.empty() ? "" : ",") + std::string(h);
        line_error(line, "expected CSV header '" + expected + "'");
      }
      have_header = true;
      continue;
    }
    if (cells.size() != header.size()) {
      line_error(line, "expected " + std::to_string(header.size()) + " columns");
    }
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!parse_double(cells[i], row[i]) || !std::isfinite(row[i])) {
        line_error(line, "non-numeric value '" + std::string(cells[i]) + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) schema_error("line 1: CSV file has no header");
  return rows;
}

std::vector<TrajectorySample> parse_trajectory_csv(std::string_view content) {
  constexpr std::string_view header[] = {"t", "x", "y", "z"};
  std::vector<TrajectorySample> out;
  for (const auto& r : parse_numeric_csv(content, header)) out.push_back({r[0], r[1], r[2], r[3]});
  return out;
}

std::string serialize_trajectory_csv(std::span<const TrajectorySample> samples) {
  std::string out = "t,x,y,z\n";
  for (const auto& s : samples) {
    out += real17(s.t) + "," + real17(s.x) + "," + real17(s.y) + "," + real17(s.z) + "\n";
  }
  return out;
}

std::vector<ImageLine> parse_lines_csv(std::string_view content) {
  constexpr std::string_view header[] = {"u1", "v1", "u2", "v2"};
  std::vector<ImageLine> out;
  for (const auto& r : parse_numeric_csv(content, header)) out.push_back({{r[0], r[1]}, {r[2], r[3]}});
  return out;
}

std::string serialize_lines_csv(std::span<const ImageLine> lines) {
  std::string out = "u1,v1,u2,v2\n";
  for (const auto& l : lines) {
    out += real17(l.p.u) + "," + real17(l.p.v) + "," + real17(l.q.u) + "," + real17(l.q.v) + "\n";
  }
  return out;
}

std::vector<GroundCorrespondence> parse_control_points_csv(std::string_view content) {
  constexpr std::string_view header[] = {"u", "v", "gx", "gz"};
  std::vector<GroundCorrespondence> out;
  for (const auto& r : parse_numeric_csv(content, header)) {
    out.push_back({{r[0], r[1]}, Vector2(r[2], r[3])});
  }
  return out;
}

std::string serialize_control_points_csv(std::span<const GroundCorrespondence> points) {
  std::string out = "u,v,gx,gz\n";
  for (const auto& p : points) {
    out += real17(p.pixel.u) + "," + real17(p.pixel.v) + "," + real17(p.ground.x()) + "," +
           real17(p.ground.y()) + "\n";
  }
  return out;
}

std::vector<Correspondence2D3D> parse_correspondences_csv(std::string_view content) {
  constexpr std::string_view header[] = {"u", "v", "x", "y", "z"};
  std::vector<Correspondence2D3D> out;
  for (const auto& r : parse_numeric_csv(content, header)) {
    out.push_back({{r[0], r[1]}, Vector3(r[2], r[3], r[4])});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Point clouds

PointCloud parse_point_cloud_text(std::string_view content) {
  PointCloud cloud;
  bool any_intensity = false, any_plain = false;
  for (const auto& [line, raw_line] : lines_of(content)) {
    std::string_view l = raw_line;
    if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    std::istringstream ss{std::string(l)};
    std::vector<double> values;
    std::string token;
    while (ss >> token) {
      double v = 0.0;
      if (!parse_double(token, v) || !std::isfinite(v)) line_error(line, "non-numeric value '" + token + "'");
      values.push_back(v);
    }
    if (values.size() != 3 && values.size() != 4) line_error(line, "expected 3 or 4 columns");
    cloud.points.emplace_back(values[0], values[1], values[2]);
    if (values.size() == 4) {
      any_intensity = true;
      cloud.intensity.push_back(static_cast<float>(values[3]));
    } else {
      any_plain = true;
    }
  }
  if (any_intensity && any_plain) schema_error("point cloud mixes 3- and 4-column rows");
  return cloud;
}

PointCloud read_point_cloud(const std::filesystem::path& path) {
  const std::string content = read_text(path);
  if (path.extension() != ".bin") return parse_point_cloud_text(content);
  constexpr std::size_t record = 4 * sizeof(float);
  if (content.size() % record != 0) {
    schema_error("binary cloud size is not a multiple of 16 bytes");
  }
  PointCloud cloud;
  const std::size_t n = content.size() / record;
  cloud.points.reserve(n);
  cloud.intensity.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    float v[4];
    std::memcpy(v, content.data() + i * record, record);
    if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2])) {
      schema_error("binary cloud record " + std::to_string(i) + " is not finite");
    }
    cloud.points.emplace_back(v[0], v[1], v[2]);
    cloud.intensity.push_back(v[3]);
  }
  return cloud;
}

std::string serialize_point_cloud_text(const PointCloud& cloud) {
  std::string out;
  const bool with_intensity = cloud.intensity.size() == cloud.points.size() && !cloud.points.empty();
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Vector3& p = cloud.points[i];
    out += real17(p.x()) + " " + real17(p.y()) + " " + real17(p.z());
    if (with_intensity) out += " " + real17(cloud.intensity[i]);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// PGM

BinaryRaster parse_pgm(std::string_view bytes) {
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return std::string(bytes.substr(start, pos - start));
  };
  auto next_int = [&](const char* what) {
    const std::string tok = next_token();
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (tok.empty() || end != tok.c_str() + tok.size() || v < 0) {
      schema_error(std::string("PGM: bad ") + what);
    }
    return static_cast<int>(v);
  };
  const std::string magic = next_token();
  if (magic != "P2" && magic != "P5") schema_error("PGM: expected P2 or P5 magic");
  const int w = next_int("width");
  const int h = next_int("height");
  const int maxval = next_int("maxval");
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) schema_error("PGM: bad header values");
  BinaryRaster raster(w, h);
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i) {
      raster.pixels[i] = next_int("pixel") != 0 ? 1 : 0;
    }
  } else {
    ++pos;  // single whitespace after maxval
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (bytes.size() < pos + count * bpp) schema_error("PGM: truncated pixel data");
    for (std::size_t i = 0; i < count; ++i) {
      bool set = false;
      for (std::size_t b = 0; b < bpp; ++b) set = set || bytes[pos + i * bpp + b] != 0;
      raster.pixels[i] = set ? 1 : 0;
    }
  }
  return raster;
}

std::string serialize_pgm(const BinaryRaster& raster) {
  std::string out = "P5\n" + std::to_string(raster.width) + " " + std::to_string(raster.height) +
                    "\n255\n";
  for (auto p : raster.pixels) out += static_cast<char>(p ? 255 : 0);
  return out;
}

// ---------------------------------------------------------------------------
// Scene

Json scene_to_json(const SyntheticScene& scene, std::string_view preset) {
  const CameraModel& c = scene.camera;
  Json breaks = Json::array();
  for (const auto& b : scene.profile.breaks) breaks.push_back(Json{{"z", b.z}, {"grade", b.grade}});
  Json targets = Json::array();
  for (std::size_t i = 0; i < scene.targets.size(); ++i) {
    const auto& t = scene.targets[i];
    targets.push_back(Json{{"bbox_id", "t" + std::to_string(i)},
                           {"x", t.ground.x()},
                           {"z", t.ground.y()},
                           {"class_name", std::string(to_string(t.class_name))}});
  }
  Json pose = Json::array();
  for (int i = 0; i < 9; ++i) pose.push_back(scene.camera_to_road.rotation()(i / 3, i % 3));
  const Vector3& t = scene.camera_to_road.translation();
  Json root = Json::object();
  if (!preset.empty()) root["preset"] = std::string(preset);
  root["prng"] = std::string(kSynthPrngName);
  root["seed"] = scene.seed;
  root["camera_id"] = scene.camera_id;
  root["lidar_id"] = scene.lidar_id;
  root["camera"] = Json{{"fx", c.fx}, {"fy", c.fy}, {"cx", c.cx}, {"cy", c.cy}, {"k1", c.k1},
                        {"k2", c.k2}, {"p1", c.p1}, {"p2", c.p2}, {"k3", c.k3},
                        {"width", c.width}, {"height", c.height}};
  root["height_m"] = scene.height;
  root["alpha_rad"] = scene.alpha;
  root["gamma_rad"] = scene.gamma;
  root["base_grade"] = scene.base_grade;
  root["plane_breaks"] = breaks;
  root["target_range_m"] = Json::array({scene.range_min, scene.range_max});
  root["noise"] = Json{{"pixel_sigma", scene.noise.pixel_sigma},
                       {"control_point_sigma", scene.noise.control_point_sigma}};
  root["camera_to_road"] = Json{{"rotation", pose},
                                {"translation", Json::array({t.x(), t.y(), t.z()})}};
  root["targets"] = targets;
  return root;
}

}  // namespace curb::io
