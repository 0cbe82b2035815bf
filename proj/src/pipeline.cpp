// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "egohoi/calibration.hpp"
#include "egohoi/error.hpp"
#include "egohoi/hand_locator.hpp"
#include "egohoi/heatmap.hpp"
#include "egohoi/raster.hpp"

namespace egohoi {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string frame_context(std::uint64_t frame) { return "frame " + std::to_string(frame); }

void require_exists(const fs::path& p, const char* what) {
  if (!p.empty() && !fs::exists(p)) throw Error(ErrorCode::kIoError, std::string(what) + " not found: " + p.string());
}

void require_set(const fs::path& p, const char* what) {
  if (p.empty()) throw Error(ErrorCode::kInvalidArgument, std::string("no ") + what + " path configured");
  require_exists(p, what);
}

std::map<std::string, const CameraModel*> camera_index(const std::vector<CameraModel>& cameras) {
  std::map<std::string, const CameraModel*> index;
  for (const auto& c : cameras) {
    if (!index.emplace(c.id, &c).second) throw Error(ErrorCode::kInvalidArgument, "duplicate camera id '" + c.id + "'");
  }
  return index;
}

const CameraModel& lookup(const std::map<std::string, const CameraModel*>& index, const std::string& id) {
  const auto it = index.find(id);
  if (it == index.end()) throw Error(ErrorCode::kInvalidArgument, "unknown camera '" + id + "'");
  return *it->second;
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& extension) {
  std::vector<fs::path> files;
  if (dir.empty()) return files;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kIoError, "not a directory: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == extension) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

fs::path resolve(const fs::path& root, const std::string& p) { return p.empty() ? fs::path() : root / p; }

void write_json(const fs::path& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace

// --------------------------------------------------------------------- config

void PipelineConfig::validate() const {
  if (joints < 1) throw Error(ErrorCode::kInvalidArgument, "joints must be at least 1");
  if (gate_threshold && !(*gate_threshold >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "gate_threshold must be >= 0");
  if (crop_side < 0) throw Error(ErrorCode::kInvalidArgument, "crop_side must be >= 0");
  if (!(fps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "fps must be positive");
  if (!(decision_threshold >= 0.0 && decision_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "decision_threshold must lie in [0,1]");
  }
  if (!(locator_threshold >= 0.0 && locator_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "locator_threshold must lie in [0,1]");
  }
  if (jobs < 1) throw Error(ErrorCode::kInvalidArgument, "jobs must be at least 1");
  require_exists(cameras, "cameras");
  require_exists(detections, "detections");
  require_exists(cube, "cube");
  require_exists(manifest, "manifest");
  require_exists(backgrounds, "backgrounds");
}

PipelineConfig load_config(const fs::path& path) {
  const std::string text = read_text(path);
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchemaError, path.string() + ": " + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::kSchemaError, path.string() + ": $: expected an object");

  const fs::path base = path.parent_path();
  PipelineConfig c;
  auto field = [&](const char* key, auto& out) {
    if (!root.contains(key) || root.at(key).is_null()) return;
    try {
      out = root.at(key).get<std::decay_t<decltype(out)>>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kSchemaError, path.string() + ": $." + key + ": " + e.what());
    }
  };
  auto path_field = [&](const char* key, fs::path& out) {
    std::string s;
    field(key, s);
    if (!s.empty()) out = base / s;
  };
  path_field("cameras", c.cameras);
  path_field("detections", c.detections);
  path_field("cube", c.cube);
  path_field("manifest", c.manifest);
  path_field("backgrounds", c.backgrounds);
  path_field("model", c.model);
  path_field("out", c.out);
  field("joints", c.joints);
  if (root.contains("gate_threshold") && !root.at("gate_threshold").is_null()) {
    double g = 0.0;
    field("gate_threshold", g);
    c.gate_threshold = g;
  }
  field("crop_side", c.crop_side);
  field("fps", c.fps);
  field("decision_threshold", c.decision_threshold);
  field("locator_threshold", c.locator_threshold);
  field("seed", c.seed);
  field("jobs", c.jobs);
  try {
    c.validate();
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
  return c;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& work) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ------------------------------------------------------------------ calibrate

CalibrateSummary run_calibrate(const PipelineConfig& config, std::ostream& log) {
  require_set(config.cameras, "cameras");
  require_set(config.cube, "cube");
  require_set(config.detections, "detections");
  CalibrateSummary summary;
  summary.cameras = read_cameras(config.cameras);
  const CubeSpec cube = read_cube(config.cube);
  const DetectionSet detections = read_detections(config.detections);

  CalibrationOptions options;
  options.seed = config.seed;
  for (auto& cam : summary.cameras) {
    const CubeCornerSet* corners = nullptr;
    std::uint64_t frame = 0;
    for (const auto& f : detections.frames) {
      for (const auto& set : f.cube_corners) {
        if (set.camera_id == cam.id) {
          corners = &set;
          frame = f.frame;
          break;
        }
      }
      if (corners) break;
    }
    if (!corners) {
      throw Error(ErrorCode::kInsufficientCorrespondences, "camera '" + cam.id + "' has no cube corners in any frame");
    }
    CalibrationResult result;
    try {
      result = estimate_camera_pose(cam, cube, corners->corners, options);
    } catch (const Error& e) {
      throw e.with_context("camera '" + cam.id + "', " + frame_context(frame));
    }
    cam.set_extrinsics(result.extrinsics);
    summary.rms_px.push_back(result.rms_px);
    log << "calibrated " << cam.id << " from " << frame_context(frame) << ": rms " << format_double(result.rms_px)
        << " px\n";
  }
  fs::create_directories(config.out);
  write_cameras(config.out / "cameras.json", summary.cameras);
  return summary;
}

// ------------------------------------------------------------------- simulate

void run_simulate(const PipelineConfig& config, const SimulateOptions& options, std::ostream& log) {
  const SynthScene scene = generate_scene(config.seed, options.rig);
  const RenderedScene rendered = render_detections(scene, options.render);
  const CubeSpec cube;
  const auto corners = render_cube_corners(scene, cube);

  DetectionSet set;
  set.pairs = rendered.pairs;
  for (const auto& f : rendered.frames) set.frames.push_back({f.frame, f.views, {}});
  if (!set.frames.empty()) {
    for (std::size_t c = 0; c < scene.cameras.size(); ++c) {
      set.frames.front().cube_corners.push_back({scene.cameras[c].id, corners[c]});
    }
  }

  std::vector<GroundTruthFrame> gt;
  for (const auto& p : scene.pairs) {
    gt.push_back({p.without_object, scene.poses[p.pose_index]});
    gt.push_back({p.with_object, scene.poses[p.pose_index]});
  }
  std::sort(gt.begin(), gt.end(), [](const auto& a, const auto& b) { return a.frame < b.frame; });

  fs::create_directories(config.out);
  write_cameras(config.out / "cameras.json", scene.cameras);
  write_cube(config.out / "cube.json", cube);
  write_detections(config.out / "detections.json", set);
  write_ground_truth(config.out / "gt.json", gt);
  log << "simulated " << scene.cameras.size() << " cameras, " << scene.pairs.size() << " pairs\n";

  if (options.fusion_samples > 0) {
    const fs::path dir = config.out / "fusion";
    fs::create_directories(dir);
    const auto samples = generate_fusion_suite(config.seed, options.fusion_samples, options.fusion_mask_size);
    Manifest manifest;
    manifest.entries.resize(samples.size());
    parallel_for(samples.size(), config.jobs, [&](std::size_t i) {
      char stem[32];
      std::snprintf(stem, sizeof(stem), "sample_%05zu", i);
      ManifestEntry& e = manifest.entries[i];
      e.frame = i;
      e.pose = std::string(stem) + "_pose.hmap";
      e.hand = std::string(stem) + "_hand.pgm";
      e.object = std::string(stem) + "_object.pgm";
      e.label = samples[i].label;
      write_hmap(dir / e.pose, samples[i].pose);
      write_pgm(dir / e.hand, samples[i].hand);
      write_pgm(dir / e.object, samples[i].object);
    });
    write_manifest(dir / "manifest.json", manifest);
    log << "wrote " << samples.size() << " fusion samples to " << dir.string() << "\n";
  }
}

// -------------------------------------------------------------- annotate-pair

AnnotateSummary annotate_pairs(const DetectionSet& detections, const std::vector<CameraModel>& cameras,
                               std::optional<double> gate_threshold, int jobs) {
  if (gate_threshold && !(*gate_threshold >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gate threshold must be >= 0");
  }
  const auto index = camera_index(cameras);
  std::vector<FramePair> pairs = detections.pairs;
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.with_object < b.with_object; });

  AnnotateSummary summary;
  summary.records.resize(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    const FramePair& pair = pairs[i];
    const DetectionFrame* with = detections.find(pair.with_object);
    const DetectionFrame* without = detections.find(pair.without_object);
    if (!without) {
      throw Error(ErrorCode::kMissingPair, frame_context(pair.with_object) + ": partner frame " +
                                               std::to_string(pair.without_object) + " is missing");
    }
    if (!with) {
      throw Error(ErrorCode::kMissingPair, frame_context(pair.with_object) + ": frame is missing (partner of frame " +
                                               std::to_string(pair.without_object) + ")");
    }
    try {
      std::vector<CameraModel> view_cameras;
      for (const auto& v : without->views) view_cameras.push_back(lookup(index, v.camera_id));
      const TriangulationResult tri = triangulate(without->views, view_cameras);

      std::vector<CameraModel> target_cameras;
      for (const auto& v : with->views) target_cameras.push_back(lookup(index, v.camera_id));

      AnnotationRecord& rec = summary.records[i];
      rec.frame = pair.with_object;
      rec.joints3d = tri.joints;
      rec.loss = tri.loss;
      const double threshold = gate_threshold.value_or(default_gate_threshold(tri.observation_count));
      rec.valid = !tri.any_flagged() && gate_annotation(tri.loss, threshold);
      rec.labels2d = transfer_labels(tri.joints, target_cameras);
    } catch (const Error& e) {
      throw e.with_context(frame_context(pair.with_object));
    }
  });
  for (const auto& r : summary.records) (r.valid ? summary.valid : summary.invalid)++;
  return summary;
}

AnnotateSummary run_annotate_pair(const PipelineConfig& config, std::ostream& log) {
  require_set(config.cameras, "cameras");
  require_set(config.detections, "detections");
  const auto cameras = read_cameras(config.cameras);
  const auto detections = read_detections(config.detections);
  if (detections.pairs.empty()) throw Error(ErrorCode::kMissingPair, "detections declare no frame pairs");
  AnnotateSummary summary = annotate_pairs(detections, cameras, config.gate_threshold, config.jobs);
  fs::create_directories(config.out);
  write_annotations(config.out / "annotations.json", summary.records);
  log << "annotated " << summary.records.size() << " pairs: " << summary.valid << " valid, " << summary.invalid
      << " invalid\n";
  return summary;
}

// -------------------------------------------------------------------- augment

int run_augment(const PipelineConfig& config, const AugmentConfig& augment, const fs::path& input_dir,
                std::ostream& log) {
  AugmentConfig cfg = augment;
  cfg.seed = config.seed;
  cfg.validate();
  const auto inputs = sorted_files(input_dir, ".ppm");
  std::vector<ImageRaster> backgrounds;
  for (const auto& p : sorted_files(config.backgrounds, ".ppm")) backgrounds.push_back(read_ppm(p));

  fs::create_directories(config.out);
  if (fs::equivalent(config.out, input_dir)) {
    throw Error(ErrorCode::kInvalidArgument, "augment output directory must differ from the input directory");
  }
  parallel_for(inputs.size(), config.jobs, [&](std::size_t i) {
    const fs::path& in = inputs[i];
    try {
      const ImageRaster image = read_ppm(in);
      KeypointSet kps;
      const fs::path kp_path = fs::path(in).replace_extension(".json");
      if (fs::exists(kp_path)) kps = read_keypoints(kp_path);
      const AugmentResult res = augment_frame(image, kps.keypoints, backgrounds, cfg, i);
      write_ppm(config.out / in.filename(), res.image);
      if (fs::exists(kp_path)) write_keypoints(config.out / kp_path.filename(), {res.joints, kps.visible});
    } catch (const Error& e) {
      throw e.with_context(in.filename().string());
    }
  });
  log << "augmented " << inputs.size() << " images with " << backgrounds.size() << " backgrounds\n";
  return static_cast<int>(inputs.size());
}

// --------------------------------------------------------------------- detect

namespace {

struct FrameOutcome {
  std::optional<double> p_hoi;
  HoiStatus status = HoiStatus::kNoHand;
  std::optional<HandKeypoint> right;
  int frame_width = 0;
  int frame_height = 0;
  std::string note;
};

FrameOutcome detect_frame(const Manifest& manifest, const ManifestEntry& e, const FusionModel& model,
                          const PipelineConfig& config) {
  FrameOutcome out;
  const AblationFlags& ab = model.ablate;
  const fs::path pose = resolve(manifest.root, e.pose);
  const fs::path hand = resolve(manifest.root, e.hand);
  const fs::path object = resolve(manifest.root, e.object);
  std::vector<std::string> missing;
  auto check = [&](const fs::path& p, const char* name) {
    if (p.empty() || !fs::exists(p)) missing.push_back(name);
  };
  check(pose, "pose");
  check(hand, "hand");
  check(object, "object");
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    out.note = "missing " + list + " file, marked no_hand";
    return out;
  }

  if (!e.locator.empty()) {
    const fs::path loc = resolve(manifest.root, e.locator);
    if (!fs::exists(loc)) {
      out.note = "missing locator file, marked no_hand";
      return out;
    }
    const LocatorOutput located = decode_locator(read_hmap(loc), e.frame_width, e.frame_height, config.locator_threshold);
    out.right = select_right_hand(located.observation(e.frame));
    out.frame_width = e.frame_width;
    out.frame_height = e.frame_height;
    if (!out.right) return out;
  }

  const MaskRaster hand_mask = read_pgm(hand, MaskRole::kHand);
  if (!ab.hand && hand_mask.count() == 0) return out;
  const CueFeatures f = extract_features(read_hmap(pose), hand_mask, read_pgm(object, MaskRole::kObject), ab);
  const double p = predict(model, f);
  out.p_hoi = p;
  out.status = decide(p, config.decision_threshold) ? HoiStatus::kHoi : HoiStatus::kIdle;
  return out;
}

DetectSummary finish_timeline(HoiTimeline timeline, const PipelineConfig& config, std::ostream& log) {
  DetectSummary summary;
  summary.window = smoothing_window(timeline.fps);
  log << "smoothing window " << summary.window << " frames at " << format_double(timeline.fps) << " fps\n";
  summary.timeline = smooth_timeline(std::move(timeline));
  summary.segments = extract_segments(summary.timeline);
  fs::create_directories(config.out);
  write_timeline_csv(config.out / "timeline.csv", summary.timeline);
  write_segments(config.out / "segments.json", summary.segments);
  log << "extracted " << summary.segments.size() << " hoi segments over " << summary.timeline.size() << " frames\n";
  return summary;
}

}  // namespace

DetectSummary run_detect(const PipelineConfig& config, std::ostream& log) {
  require_set(config.manifest, "manifest");
  require_set(config.model, "model");
  const Manifest manifest = read_manifest(config.manifest);
  const FusionModel model = read_model(config.model);

  const std::size_t frames = manifest.entries.empty() ? 0 : manifest.entries.back().frame + 1;
  std::vector<const ManifestEntry*> by_frame(frames, nullptr);
  for (const auto& e : manifest.entries) by_frame[e.frame] = &e;

  std::vector<FrameOutcome> outcomes(frames);
  parallel_for(frames, config.jobs, [&](std::size_t i) {
    if (!by_frame[i]) {
      outcomes[i].note = "not in manifest, marked no_hand";
      return;
    }
    try {
      outcomes[i] = detect_frame(manifest, *by_frame[i], model, config);
    } catch (const Error& e) {
      throw e.with_context(frame_context(i));
    }
  });

  HoiTimeline timeline;
  timeline.fps = config.fps;
  int missing = 0;
  ordered_json rois = ordered_json::array();
  Vec2 track(0.0, 0.0);
  for (std::size_t i = 0; i < frames; ++i) {
    const FrameOutcome& o = outcomes[i];
    if (!o.note.empty()) {
      ++missing;
      log << frame_context(i) << ": " << o.note << "\n";
    }
    timeline.p_hoi.push_back(o.p_hoi);
    timeline.raw.push_back(o.status);
    // The tracking box follows the right hand; frames without one keep the
    // previous center.
    if (config.crop_side > 0 && o.frame_width > 0) {
      std::vector<Vec2> pts;
      if (o.right) pts.emplace_back(o.right->u, o.right->v);
      track = update_track(track, pts);
      if (o.right) {
        const RoiBox roi = roi_crop(o.frame_width, o.frame_height, track, config.crop_side);
        rois.push_back({{"frame", i}, {"x0", roi.x0}, {"y0", roi.y0}, {"side", roi.side}});
      }
    }
  }
  DetectSummary summary = finish_timeline(std::move(timeline), config, log);
  summary.missing_frames = missing;
  if (config.crop_side > 0 && !rois.empty()) write_json(config.out / "rois.json", rois);
  return summary;
}

DetectSummary run_segment(const PipelineConfig& config, const fs::path& timeline_csv, std::ostream& log) {
  HoiTimeline timeline = read_timeline_csv(timeline_csv, config.fps);
  timeline.smoothed.clear();
  return finish_timeline(std::move(timeline), config, log);
}

// ---------------------------------------------------------------- evaluation

SegReport evaluate_segments(const std::vector<Segment>& pred, const std::vector<Segment>& gt, double iou,
                            std::size_t frames) {
  SegReport report;
  report.scores = f1_at_iou(pred, gt, iou);
  if (frames == 0) {
    for (const auto* list : {&pred, &gt}) {
      for (const auto& s : *list) frames = std::max<std::size_t>(frames, s.end + 1);
    }
    frames = std::max<std::size_t>(frames, 1);
  }
  report.frame_acc = frame_accuracy(paint_segments(pred, frames), paint_segments(gt, frames));
  return report;
}

SegReport run_report(const fs::path& pred, const fs::path& gt, double iou, std::size_t frames,
                     const fs::path& report_path) {
  const SegReport r = evaluate_segments(read_segments(pred), read_segments(gt), iou, frames);
  write_json(report_path, ordered_json{{"precision", r.scores.precision},
                                       {"recall", r.scores.recall},
                                       {"f1", r.scores.f1},
                                       {"frame_acc", r.frame_acc}});
  return r;
}

namespace {

enum class KeypointFile { k2d, kFrames, kAnnotations };

KeypointFile classify(const fs::path& path) {
  const json root = json::parse(read_text(path), nullptr, false);
  if (root.is_discarded()) throw Error(ErrorCode::kSchemaError, path.string() + ": not valid JSON");
  if (root.is_array()) return KeypointFile::kAnnotations;
  if (root.is_object() && root.contains("keypoints")) return KeypointFile::k2d;
  if (root.is_object() && root.contains("frames")) return KeypointFile::kFrames;
  throw Error(ErrorCode::kSchemaError, path.string() + ": $: expected \"keypoints\", \"frames\" or an annotation list");
}

std::map<std::uint64_t, Joints3D> load_3d(const fs::path& path, KeypointFile kind) {
  std::map<std::uint64_t, Joints3D> out;
  if (kind == KeypointFile::kFrames) {
    for (auto& f : read_ground_truth(path)) out[f.frame] = std::move(f.joints3d);
  } else {
    for (auto& r : read_annotations(path)) {
      if (r.valid) out[r.frame] = std::move(r.joints3d);
    }
  }
  return out;
}

}  // namespace

PckReport run_eval_pck(const fs::path& pred, const fs::path& gt, double max_threshold, int steps,
                       const fs::path& curve_csv, const fs::path& auc_json) {
  const KeypointFile pk = classify(pred);
  const KeypointFile gk = classify(gt);
  if ((pk == KeypointFile::k2d) != (gk == KeypointFile::k2d)) {
    throw Error(ErrorCode::kSchemaError, "prediction and ground truth must both be 2D or both be 3D");
  }
  std::vector<double> errors;
  PckReport report;
  if (pk == KeypointFile::k2d) {
    const KeypointSet p = read_keypoints(pred);
    const KeypointSet g = read_keypoints(gt);
    if (p.keypoints.size() != g.keypoints.size()) {
      throw Error(ErrorCode::kLengthMismatch, "prediction has " + std::to_string(p.keypoints.size()) +
                                                  " keypoints, ground truth " + std::to_string(g.keypoints.size()));
    }
    for (std::size_t i = 0; i < g.keypoints.size(); ++i) {
      const bool vis = (g.visible.empty() || g.visible[i]) && (p.visible.empty() || p.visible[i]);
      if (vis) errors.push_back((p.keypoints[i] - g.keypoints[i]).norm());
    }
  } else {
    report.three_d = true;
    const auto p = load_3d(pred, pk);
    const auto g = load_3d(gt, gk);
    for (const auto& [frame, joints] : p) {
      const auto it = g.find(frame);
      if (it == g.end()) throw Error(ErrorCode::kLengthMismatch, frame_context(frame) + ": no ground truth");
      if (it->second.size() != joints.size()) {
        throw Error(ErrorCode::kLengthMismatch, frame_context(frame) + ": joint counts differ");
      }
      for (std::size_t j = 0; j < joints.size(); ++j) errors.push_back(1000.0 * (joints[j] - it->second[j]).norm());
    }
  }
  double sum = 0.0;
  for (double e : errors) sum += e;
  report.curve = pck_from_errors(errors, linear_thresholds(max_threshold, steps));
  report.mean_error = sum / static_cast<double>(errors.size());
  report.auc = auc(report.curve, 0.0, max_threshold);

  std::string csv = "threshold,pck\n";
  for (std::size_t i = 0; i < report.curve.thresholds.size(); ++i) {
    csv += format_double(report.curve.thresholds[i]) + "," + format_double(report.curve.pck[i]) + "\n";
  }
  write_text(curve_csv, csv);
  write_json(auc_json, ordered_json{{"auc", report.auc},
                                    {"mean_error", report.mean_error},
                                    {"unit", report.three_d ? "mm" : "px"},
                                    {"count", errors.size()}});
  return report;
}

// --------------------------------------------------------------- train-fusion

std::vector<LabeledFeatures> load_fusion_dataset(const fs::path& manifest_path, const AblationFlags& ablate) {
  const Manifest m = read_manifest(manifest_path);
  std::vector<LabeledFeatures> data(m.entries.size());
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const ManifestEntry& e = m.entries[i];
    if (!e.label) throw Error(ErrorCode::kSchemaError, manifest_path.string() + ": " + frame_context(e.frame) + ": missing label");
    try {
      data[i].features = extract_features(read_hmap(resolve(m.root, e.pose)), read_pgm(resolve(m.root, e.hand), MaskRole::kHand),
                                          read_pgm(resolve(m.root, e.object), MaskRole::kObject), ablate);
    } catch (const Error& err) {
      throw err.with_context(frame_context(e.frame));
    }
    data[i].label = *e.label;
  }
  return data;
}

TrainSummary run_train_fusion(const PipelineConfig& config, const TrainOptions& options, std::ostream& log) {
  require_set(config.manifest, "manifest");
  TrainOptions opts = options;
  opts.seed = config.seed;
  const auto data = load_fusion_dataset(config.manifest, opts.ablate);
  TrainSummary summary{train_fusion(data, opts), 0.0};
  summary.train_accuracy = accuracy(summary.result.model, data);
  const fs::path model_path = config.model.empty() ? config.out / "model.json" : config.model;
  if (model_path.has_parent_path()) fs::create_directories(model_path.parent_path());
  write_model(model_path, summary.result.model);
  log << "trained on " << data.size() << " samples: loss " << format_double(summary.result.loss_trace.front())
      << " -> " << format_double(summary.result.loss_trace.back()) << ", accuracy "
      << format_double(summary.train_accuracy) << "\n";
  return summary;
}

}  // namespace egohoi
