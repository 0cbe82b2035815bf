// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "egohoi/error.hpp"

namespace egohoi {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void schema_error(const fs::path& path, const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kSchemaError, path.string() + ": " + where + ": " + what);
}

json parse_file(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(limit), '\n');
    schema_error(path, "line " + std::to_string(line), e.what());
  }
}

// Field accessor that reports the JSON path on failure.
class Reader {
 public:
  Reader(const fs::path& path, const json& node, std::string where) : path_(path), node_(node), where_(std::move(where)) {}

  const json& node() const { return node_; }
  const std::string& where() const { return where_; }

  bool has(const char* key) const { return node_.is_object() && node_.contains(key) && !node_.at(key).is_null(); }

  Reader at(const char* key) const {
    if (!node_.is_object() || !node_.contains(key)) schema_error(path_, where_, std::string("missing field '") + key + "'");
    return {path_, node_.at(key), where_ + "." + key};
  }
  Reader item(std::size_t i) const {
    if (!node_.is_array() || i >= node_.size()) schema_error(path_, where_, "index " + std::to_string(i) + " out of range");
    return {path_, node_.at(i), where_ + "[" + std::to_string(i) + "]"};
  }
  std::size_t size() const {
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
  }
  void expect_size(std::size_t n) const {
    if (size() != n) fail("expected " + std::to_string(n) + " elements, got " + std::to_string(node_.size()));
  }

  template <typename T>
  T as() const {
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!node_.is_number()) fail("expected a number");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!node_.is_number_integer()) fail("expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (node_.is_number_integer() && !node_.is_number_unsigned() && node_.get<std::int64_t>() < 0) fail("expected a non-negative integer");
        }
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!node_.is_boolean()) fail("expected a boolean");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!node_.is_string()) fail("expected a string");
      }
      return node_.get<T>();
    } catch (const json::exception& e) {
      fail(e.what());
    }
  }

  template <typename T>
  T get(const char* key) const {
    return at(key).as<T>();
  }
  template <typename T>
  T get_or(const char* key, T fallback) const {
    return has(key) ? at(key).as<T>() : fallback;
  }

  [[noreturn]] void fail(const std::string& what) const { schema_error(path_, where_, what); }

 private:
  const fs::path& path_;
  const json& node_;
  std::string where_;
};

ordered_json vec3_json(const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

Vec3 read_vec3(const Reader& r) {
  r.expect_size(3);
  return {r.item(0).as<double>(), r.item(1).as<double>(), r.item(2).as<double>()};
}

void write_json(const fs::path& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- cameras

std::vector<CameraModel> read_cameras(const fs::path& path) {
  const json root = parse_file(path);
  const Reader list = Reader(path, root, "$").at("cameras");
  std::vector<CameraModel> cams;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Reader c = list.item(i);
    CameraModel cam;
    cam.id = c.get<std::string>("id");
    cam.fx = c.get<double>("fx");
    cam.fy = c.get<double>("fy");
    cam.cx = c.get<double>("cx");
    cam.cy = c.get<double>("cy");
    cam.width = c.get<int>("width");
    cam.height = c.get<int>("height");
    const Reader rot = c.at("rotation");
    rot.expect_size(9);
    for (int k = 0; k < 9; ++k) cam.rotation(k / 3, k % 3) = rot.item(k).as<double>();
    cam.translation = read_vec3(c.at("translation"));
    try {
      cam.validate();
    } catch (const Error& e) {
      c.fail(e.detail());
    }
    cams.push_back(std::move(cam));
  }
  return cams;
}

void write_cameras(const fs::path& path, const std::vector<CameraModel>& cameras) {
  ordered_json list = ordered_json::array();
  for (const auto& c : cameras) {
    ordered_json rot = ordered_json::array();
    for (int k = 0; k < 9; ++k) rot.push_back(c.rotation(k / 3, k % 3));
    list.push_back({{"id", c.id},
                    {"fx", c.fx},
                    {"fy", c.fy},
                    {"cx", c.cx},
                    {"cy", c.cy},
                    {"width", c.width},
                    {"height", c.height},
                    {"rotation", rot},
                    {"translation", vec3_json(c.translation)}});
  }
  write_json(path, ordered_json{{"cameras", list}});
}

CubeSpec read_cube(const fs::path& path) {
  const json root = parse_file(path);
  CubeSpec cube;
  cube.edge_m = Reader(path, root, "$").get<double>("edge_m");
  if (!(cube.edge_m > 0.0)) schema_error(path, "$.edge_m", "edge must be positive");
  return cube;
}

void write_cube(const fs::path& path, const CubeSpec& cube) { write_json(path, ordered_json{{"edge_m", cube.edge_m}}); }

// ------------------------------------------------------------- detections

const DetectionFrame* DetectionSet::find(std::uint64_t frame) const {
  for (const auto& f : frames) {
    if (f.frame == frame) return &f;
  }
  return nullptr;
}

DetectionSet read_detections(const fs::path& path) {
  const json root = parse_file(path);
  const Reader r(path, root, "$");
  DetectionSet set;
  const Reader frames = r.at("frames");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Reader f = frames.item(i);
    DetectionFrame frame;
    frame.frame = f.get<std::uint64_t>("frame");
    const Reader views = f.at("views");
    for (std::size_t v = 0; v < views.size(); ++v) {
      const Reader view = views.item(v);
      Detection2D det{view.get<std::string>("camera"), {}};
      const Reader joints = view.at("joints");
      for (std::size_t j = 0; j < joints.size(); ++j) {
        const Reader jt = joints.item(j);
        jt.expect_size(3);
        const Joint2D joint{jt.item(0).as<double>(), jt.item(1).as<double>(), jt.item(2).as<double>()};
        if (!(joint.confidence >= 0.0 && joint.confidence <= 1.0)) jt.fail("confidence outside [0,1]");
        det.joints.push_back(joint);
      }
      frame.views.push_back(std::move(det));
    }
    if (f.has("cube_corners")) {
      const Reader sets = f.at("cube_corners");
      for (std::size_t s = 0; s < sets.size(); ++s) {
        const Reader cs = sets.item(s);
        CubeCornerSet set_out{cs.get<std::string>("camera"), {}};
        const Reader corners = cs.at("corners");
        for (std::size_t c = 0; c < corners.size(); ++c) {
          const Reader co = corners.item(c);
          co.expect_size(4);
          set_out.corners.push_back({co.item(0).as<int>(), co.item(1).as<double>(), co.item(2).as<double>(),
                                     co.item(3).as<double>()});
        }
        frame.cube_corners.push_back(std::move(set_out));
      }
    }
    set.frames.push_back(std::move(frame));
  }
  if (r.has("pairs")) {
    const Reader pairs = r.at("pairs");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const Reader p = pairs.item(i);
      set.pairs.push_back({p.get<std::uint64_t>("with_object"), p.get<std::uint64_t>("without_object"), i});
    }
  }
  return set;
}

void write_detections(const fs::path& path, const DetectionSet& detections) {
  ordered_json frames = ordered_json::array();
  for (const auto& f : detections.frames) {
    ordered_json views = ordered_json::array();
    for (const auto& v : f.views) {
      ordered_json joints = ordered_json::array();
      for (const auto& j : v.joints) joints.push_back({j.u, j.v, j.confidence});
      views.push_back({{"camera", v.camera_id}, {"joints", joints}});
    }
    ordered_json frame{{"frame", f.frame}, {"views", views}};
    if (!f.cube_corners.empty()) {
      ordered_json sets = ordered_json::array();
      for (const auto& s : f.cube_corners) {
        ordered_json corners = ordered_json::array();
        for (const auto& c : s.corners) corners.push_back({c.corner, c.u, c.v, c.confidence});
        sets.push_back({{"camera", s.camera_id}, {"corners", corners}});
      }
      frame["cube_corners"] = sets;
    }
    frames.push_back(frame);
  }
  ordered_json pairs = ordered_json::array();
  for (const auto& p : detections.pairs) pairs.push_back({{"with_object", p.with_object}, {"without_object", p.without_object}});
  write_json(path, ordered_json{{"frames", frames}, {"pairs", pairs}});
}

std::vector<GroundTruthFrame> read_ground_truth(const fs::path& path) {
  const json root = parse_file(path);
  const Reader frames = Reader(path, root, "$").at("frames");
  std::vector<GroundTruthFrame> out;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Reader f = frames.item(i);
    GroundTruthFrame g{f.get<std::uint64_t>("frame"), {}};
    const Reader joints = f.at("joints3d");
    for (std::size_t j = 0; j < joints.size(); ++j) g.joints3d.push_back(read_vec3(joints.item(j)));
    out.push_back(std::move(g));
  }
  return out;
}

void write_ground_truth(const fs::path& path, const std::vector<GroundTruthFrame>& frames) {
  ordered_json list = ordered_json::array();
  for (const auto& f : frames) {
    ordered_json joints = ordered_json::array();
    for (const auto& j : f.joints3d) joints.push_back(vec3_json(j));
    list.push_back({{"frame", f.frame}, {"joints3d", joints}});
  }
  write_json(path, ordered_json{{"frames", list}});
}

// ------------------------------------------------------------ annotations

void write_annotations(const fs::path& path, const std::vector<AnnotationRecord>& records) {
  ordered_json list = ordered_json::array();
  for (const auto& r : records) {
    ordered_json joints = ordered_json::array();
    for (const auto& j : r.joints3d) joints.push_back(vec3_json(j));
    ordered_json labels = ordered_json::object();
    for (const auto& view : r.labels2d) {
      ordered_json l = ordered_json::array();
      for (const auto& label : view.labels) l.push_back({label.u, label.v, label.visible});
      labels[view.camera_id] = l;
    }
    list.push_back(
        {{"frame", r.frame}, {"valid", r.valid}, {"loss", r.loss}, {"joints3d", joints}, {"labels2d", labels}});
  }
  write_json(path, list);
}

std::vector<AnnotationRecord> read_annotations(const fs::path& path) {
  const json root = parse_file(path);
  const Reader list(path, root, "$");
  std::vector<AnnotationRecord> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Reader r = list.item(i);
    AnnotationRecord rec;
    rec.frame = r.get<std::uint64_t>("frame");
    rec.valid = r.get<bool>("valid");
    rec.loss = r.get<double>("loss");
    const Reader joints = r.at("joints3d");
    for (std::size_t j = 0; j < joints.size(); ++j) rec.joints3d.push_back(read_vec3(joints.item(j)));
    const Reader labels = r.at("labels2d");
    if (!labels.node().is_object()) labels.fail("expected an object");
    for (const auto& [camera, value] : labels.node().items()) {
      const Reader l(path, value, labels.where() + "." + camera);
      ViewLabels view{camera, {}};
      for (std::size_t j = 0; j < l.size(); ++j) {
        const Reader e = l.item(j);
        e.expect_size(3);
        view.labels.push_back({e.item(0).as<double>(), e.item(1).as<double>(), e.item(2).as<bool>()});
      }
      rec.labels2d.push_back(std::move(view));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

// --------------------------------------------------------------- segments

void write_segments(const fs::path& path, const std::vector<Segment>& segments) {
  ordered_json list = ordered_json::array();
  for (const auto& s : segments) list.push_back({{"start", s.start}, {"end", s.end}, {"label", s.label}});
  write_json(path, list);
}

std::vector<Segment> read_segments(const fs::path& path) {
  const json root = parse_file(path);
  const Reader list(path, root, "$");
  std::vector<Segment> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Reader s = list.item(i);
    Segment seg{s.get<std::uint64_t>("start"), s.get<std::uint64_t>("end"), s.get_or<std::string>("label", "hoi")};
    if (seg.start > seg.end) s.fail("start must not exceed end");
    out.push_back(std::move(seg));
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].start <= out[i - 1].end) schema_error(path, "$[" + std::to_string(i) + "]", "segments must be sorted and disjoint");
  }
  return out;
}

// --------------------------------------------------------------- timeline

void write_timeline_csv(const fs::path& path, const HoiTimeline& timeline) {
  timeline.validate();
  std::string text = "frame,p_hoi,raw,smoothed\n";
  for (std::size_t i = 0; i < timeline.size(); ++i) {
    text += std::to_string(i);
    text += ',';
    if (timeline.p_hoi[i]) text += format_double(*timeline.p_hoi[i]);
    text += ',';
    text += to_string(timeline.raw[i]);
    text += ',';
    if (i < timeline.smoothed.size()) text += to_string(timeline.smoothed[i]);
    text += '\n';
  }
  write_text(path, text);
}

HoiTimeline read_timeline_csv(const fs::path& path, double fps) {
  std::istringstream in(read_text(path));
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != "frame,p_hoi,raw,smoothed") {
    schema_error(path, "line 1", "expected header 'frame,p_hoi,raw,smoothed'");
  }
  HoiTimeline t;
  t.fps = fps;
  bool any_smoothed = false;
  bool all_smoothed = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    const std::string where = "line " + std::to_string(line_no);
    if (cells.size() != 4) schema_error(path, where, "expected 4 columns");
    try {
      if (std::stoull(cells[0]) != t.raw.size()) schema_error(path, where, "frames must be consecutive from 0");
      t.p_hoi.push_back(cells[1].empty() ? std::nullopt : std::optional<double>(std::stod(cells[1])));
      t.raw.push_back(parse_status(cells[2]));
      if (!cells[3].empty()) {
        t.smoothed.push_back(parse_status(cells[3]));
        any_smoothed = true;
      } else {
        all_smoothed = false;
      }
    } catch (const Error& e) {
      schema_error(path, where, e.detail());
    } catch (const std::logic_error&) {
      schema_error(path, where, "malformed number");
    }
  }
  if (any_smoothed && !all_smoothed) schema_error(path, "smoothed", "column partially filled");
  t.validate();
  return t;
}

// ------------------------------------------------------------------ model

void write_model(const fs::path& path, const FusionModel& model) {
  model.validate();
  ordered_json w1 = ordered_json::array();
  for (int r = 0; r < model.hidden; ++r) {
    for (int c = 0; c < model.feature_len; ++c) w1.push_back(model.w1(r, c));
  }
  ordered_json b1 = ordered_json::array();
  ordered_json w2 = ordered_json::array();
  for (int r = 0; r < model.hidden; ++r) {
    b1.push_back(model.b1[r]);
    w2.push_back(model.w2[r]);
  }
  write_json(path, ordered_json{{"hidden", model.hidden},
                                {"w1", w1},
                                {"b1", b1},
                                {"w2", w2},
                                {"b2", model.b2},
                                {"feature_len", model.feature_len},
                                {"ablate",
                                 {{"pose", model.ablate.pose},
                                  {"hand", model.ablate.hand},
                                  {"object", model.ablate.object}}}});
}

FusionModel read_model(const fs::path& path) {
  const json root = parse_file(path);
  const Reader r(path, root, "$");
  const int hidden = r.get<int>("hidden");
  const int feature_len = r.get<int>("feature_len");
  if (hidden < 1 || feature_len < 1) r.fail("hidden and feature_len must be positive");
  FusionModel m = FusionModel::zeros(hidden, feature_len);
  const Reader w1 = r.at("w1");
  w1.expect_size(static_cast<std::size_t>(hidden) * feature_len);
  for (int i = 0; i < hidden * feature_len; ++i) m.w1(i / feature_len, i % feature_len) = w1.item(i).as<double>();
  const Reader b1 = r.at("b1");
  const Reader w2 = r.at("w2");
  b1.expect_size(hidden);
  w2.expect_size(hidden);
  for (int i = 0; i < hidden; ++i) {
    m.b1[i] = b1.item(i).as<double>();
    m.w2[i] = w2.item(i).as<double>();
  }
  m.b2 = r.get<double>("b2");
  if (r.has("ablate")) {
    const Reader a = r.at("ablate");
    m.ablate = {a.get_or<bool>("pose", false), a.get_or<bool>("hand", false), a.get_or<bool>("object", false)};
  }
  return m;
}

// ---------------------------------------------------------------- augment

AugmentConfig read_augment_config(const fs::path& path) {
  const json root = parse_file(path);
  // Accept either a bare augment config or a pipeline config with an "augment" section.
  const Reader top(path, root, "$");
  const Reader r = top.has("augment") ? top.at("augment") : top;
  AugmentConfig c;
  if (r.has("green")) {
    const Reader g = r.at("green");
    c.green.h_lo = g.get_or("h_lo", c.green.h_lo);
    c.green.h_hi = g.get_or("h_hi", c.green.h_hi);
    c.green.s_min = g.get_or("s_min", c.green.s_min);
    c.green.v_min = g.get_or("v_min", c.green.v_min);
  }
  c.occlusion_lines = r.get_or("occlusion_lines", c.occlusion_lines);
  c.occlusion_circles = r.get_or("occlusion_circles", c.occlusion_circles);
  c.line_width_min = r.get_or("line_width_min", c.line_width_min);
  c.line_width_max = r.get_or("line_width_max", c.line_width_max);
  c.circle_radius_min = r.get_or("circle_radius_min", c.circle_radius_min);
  c.circle_radius_max = r.get_or("circle_radius_max", c.circle_radius_max);
  c.contrast_min = r.get_or("contrast_min", c.contrast_min);
  c.contrast_max = r.get_or("contrast_max", c.contrast_max);
  c.brightness_min = r.get_or("brightness_min", c.brightness_min);
  c.brightness_max = r.get_or("brightness_max", c.brightness_max);
  c.max_rotation_deg = r.get_or("max_rotation_deg", c.max_rotation_deg);
  c.scale_min = r.get_or("scale_min", c.scale_min);
  c.scale_max = r.get_or("scale_max", c.scale_max);
  c.max_translation_frac = r.get_or("max_translation_frac", c.max_translation_frac);
  c.seed = r.get_or<std::uint64_t>("seed", c.seed);
  try {
    c.validate();
  } catch (const Error& e) {
    r.fail(e.detail());
  }
  return c;
}

// -------------------------------------------------------------- keypoints

KeypointSet read_keypoints(const fs::path& path) {
  const json root = parse_file(path);
  const Reader r(path, root, "$");
  KeypointSet set;
  const Reader kps = r.at("keypoints");
  for (std::size_t i = 0; i < kps.size(); ++i) {
    const Reader k = kps.item(i);
    k.expect_size(2);
    set.keypoints.emplace_back(k.item(0).as<double>(), k.item(1).as<double>());
  }
  if (r.has("visible")) {
    const Reader vis = r.at("visible");
    vis.expect_size(set.keypoints.size());
    for (std::size_t i = 0; i < vis.size(); ++i) set.visible.push_back(vis.item(i).as<bool>());
  }
  return set;
}

void write_keypoints(const fs::path& path, const KeypointSet& set) {
  ordered_json kps = ordered_json::array();
  for (const auto& k : set.keypoints) kps.push_back({k.x(), k.y()});
  ordered_json root{{"keypoints", kps}};
  if (!set.visible.empty()) {
    ordered_json vis = ordered_json::array();
    for (bool v : set.visible) vis.push_back(v);
    root["visible"] = vis;
  }
  write_json(path, root);
}

// --------------------------------------------------------------- manifest

Manifest read_manifest(const fs::path& path) {
  const json root = parse_file(path);
  const Reader r(path, root, "$");
  Manifest m;
  m.root = path.parent_path();
  if (r.has("fps")) m.fps = r.get<double>("fps");
  const Reader frames = r.at("frames");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Reader f = frames.item(i);
    ManifestEntry e;
    e.frame = f.get<std::uint64_t>("frame");
    e.pose = f.get_or<std::string>("pose", "");
    e.hand = f.get_or<std::string>("hand", "");
    e.object = f.get_or<std::string>("object", "");
    if (f.has("label")) {
      const int label = f.get<int>("label");
      if (label != 0 && label != 1) f.at("label").fail("label must be 0 or 1");
      e.label = label;
    }
    e.locator = f.get_or<std::string>("locator", "");
    e.frame_width = f.get_or<int>("frame_width", 0);
    e.frame_height = f.get_or<int>("frame_height", 0);
    if (!e.locator.empty() && (e.frame_width <= 0 || e.frame_height <= 0)) {
      f.fail("locator entries need frame_width and frame_height");
    }
    m.entries.push_back(std::move(e));
  }
  std::sort(m.entries.begin(), m.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.frame < b.frame; });
  for (std::size_t i = 1; i < m.entries.size(); ++i) {
    if (m.entries[i].frame == m.entries[i - 1].frame) {
      schema_error(path, "$.frames", "duplicate frame " + std::to_string(m.entries[i].frame));
    }
  }
  return m;
}

void write_manifest(const fs::path& path, const Manifest& manifest) {
  ordered_json frames = ordered_json::array();
  for (const auto& e : manifest.entries) {
    ordered_json f{{"frame", e.frame}};
    if (!e.pose.empty()) f["pose"] = e.pose;
    if (!e.hand.empty()) f["hand"] = e.hand;
    if (!e.object.empty()) f["object"] = e.object;
    if (e.label) f["label"] = *e.label;
    if (!e.locator.empty()) {
      f["locator"] = e.locator;
      f["frame_width"] = e.frame_width;
      f["frame_height"] = e.frame_height;
    }
    frames.push_back(f);
  }
  ordered_json root = ordered_json::object();
  if (manifest.fps) root["fps"] = *manifest.fps;
  root["frames"] = frames;
  write_json(path, root);
}

}  // namespace egohoi
