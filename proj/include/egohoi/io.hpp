// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "egohoi/augment.hpp"
#include "egohoi/calibration.hpp"
#include "egohoi/camera.hpp"
#include "egohoi/hoi_fusion.hpp"
#include "egohoi/metrics.hpp"
#include "egohoi/pose3d.hpp"
#include "egohoi/synth_rig.hpp"
#include "egohoi/video_segmenter.hpp"

namespace egohoi {

namespace fs = std::filesystem;

// File formats. Every reader throws kSchemaError naming the file and field on
// malformed content and kIoError when the file cannot be opened.

/// cameras.json: {"cameras":[{"id","fx","fy","cx","cy","width","height",
/// "rotation":[9, row-major],"translation":[3]}]}
std::vector<CameraModel> read_cameras(const fs::path& path);
void write_cameras(const fs::path& path, const std::vector<CameraModel>& cameras);

/// cube.json: {"edge_m": f64}
CubeSpec read_cube(const fs::path& path);
void write_cube(const fs::path& path, const CubeSpec& cube);

struct CubeCornerSet {
  std::string camera_id;
  std::vector<CornerObservation> corners;
};

struct DetectionFrame {
  std::uint64_t frame = 0;
  std::vector<Detection2D> views;
  std::vector<CubeCornerSet> cube_corners;
};

/// detections.json: {"frames":[{"frame","views":[{"camera","joints":[[u,v,conf],...]}],
/// "cube_corners":[{"camera","corners":[[index,u,v,conf],...]}]}],
/// "pairs":[{"with_object","without_object"}]}
struct DetectionSet {
  std::vector<DetectionFrame> frames;
  std::vector<FramePair> pairs;

  const DetectionFrame* find(std::uint64_t frame) const;
};

DetectionSet read_detections(const fs::path& path);
void write_detections(const fs::path& path, const DetectionSet& detections);

/// gt.json: {"frames":[{"frame","joints3d":[[x,y,z],...]}]}
struct GroundTruthFrame {
  std::uint64_t frame = 0;
  Joints3D joints3d;
};
std::vector<GroundTruthFrame> read_ground_truth(const fs::path& path);
void write_ground_truth(const fs::path& path, const std::vector<GroundTruthFrame>& frames);

/// annotations.json: [{"frame","valid","loss","joints3d","labels2d":{camera:[[u,v,visible],...]}}]
void write_annotations(const fs::path& path, const std::vector<AnnotationRecord>& records);
std::vector<AnnotationRecord> read_annotations(const fs::path& path);

/// segments.json: [{"start","end","label"}]
void write_segments(const fs::path& path, const std::vector<Segment>& segments);
std::vector<Segment> read_segments(const fs::path& path);

/// timeline.csv: header frame,p_hoi,raw,smoothed (p_hoi empty when no hand).
void write_timeline_csv(const fs::path& path, const HoiTimeline& timeline);
HoiTimeline read_timeline_csv(const fs::path& path, double fps);

/// model.json: {"hidden","w1":[row-major],"b1","w2","b2","feature_len","ablate":{"pose","hand","object"}}
void write_model(const fs::path& path, const FusionModel& model);
FusionModel read_model(const fs::path& path);

/// aug.json: any subset of the AugmentConfig fields; missing keys keep defaults.
AugmentConfig read_augment_config(const fs::path& path);

/// Keypoint files for eval-pck: {"keypoints":[[u,v],...],"visible":[bool,...]}
struct KeypointSet {
  std::vector<Vec2> keypoints;
  std::vector<bool> visible;
};
KeypointSet read_keypoints(const fs::path& path);
void write_keypoints(const fs::path& path, const KeypointSet& set);

/// Fusion / detection manifest. Entries reference files relative to the
/// manifest's directory.
struct ManifestEntry {
  std::uint64_t frame = 0;
  std::string pose;    // HMAP
  std::string hand;    // PGM
  std::string object;  // PGM
  std::optional<int> label;
  std::string locator;  // optional HMAP (2 x 48 x 28)
  int frame_width = 0;
  int frame_height = 0;
};
struct Manifest {
  fs::path root;
  std::optional<double> fps;
  std::vector<ManifestEntry> entries;
};
Manifest read_manifest(const fs::path& path);
void write_manifest(const fs::path& path, const Manifest& manifest);

/// Truncate-and-write.
void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

/// Shortest round-trip decimal form used in every text output.
std::string format_double(double v);

}  // namespace egohoi
