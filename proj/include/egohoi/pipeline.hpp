// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "egohoi/augment.hpp"
#include "egohoi/hoi_fusion.hpp"
#include "egohoi/io.hpp"
#include "egohoi/metrics.hpp"
#include "egohoi/pose3d.hpp"
#include "egohoi/synth_rig.hpp"
#include "egohoi/video_segmenter.hpp"

namespace egohoi {

/// Shared settings for every subcommand. Loaded from --config (JSON, paths
/// relative to the config file) and then overridden by command-line flags.
struct PipelineConfig {
  fs::path cameras;
  fs::path detections;
  fs::path cube;
  fs::path manifest;
  fs::path backgrounds;
  fs::path model;
  fs::path out = ".";

  int joints = kDefaultJointCount;
  /// Empty: 9 px^2 per visible observation.
  std::optional<double> gate_threshold;
  /// ROI side in full-frame pixels; 0 disables ROI output.
  int crop_side = 0;
  double fps = 30.0;
  double decision_threshold = kDefaultDecisionThreshold;
  double locator_threshold = 0.25;
  std::uint64_t seed = 0;
  int jobs = 1;

  /// Throws kInvalidArgument for out-of-range numbers and kIoError for
  /// referenced paths that do not exist.
  void validate() const;
};

/// Unknown keys are ignored so one file can also carry an "augment" section.
PipelineConfig load_config(const fs::path& path);

/// Runs `work(i)` for i in [0, n) on up to `jobs` threads. Each index is
/// handled exactly once; the error from the lowest failing index is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& work);

// ------------------------------------------------------------------ calibrate

struct CalibrateSummary {
  std::vector<CameraModel> cameras;
  std::vector<double> rms_px;
};

/// Intrinsics from config.cameras, corners from the first detections frame
/// that has them for each camera; writes out/cameras.json with extrinsics.
CalibrateSummary run_calibrate(const PipelineConfig& config, std::ostream& log);

// ------------------------------------------------------------------- simulate

struct SimulateOptions {
  RigOptions rig;
  RenderOptions render;
  /// Fusion samples written to out/fusion with a manifest; 0 skips.
  int fusion_samples = 0;
  int fusion_mask_size = 64;
};

/// Writes cameras.json, cube.json, detections.json (with cube corners on the
/// first frame) and gt.json for both frames of every pair.
void run_simulate(const PipelineConfig& config, const SimulateOptions& options, std::ostream& log);

// -------------------------------------------------------------- annotate-pair

struct AnnotateSummary {
  std::vector<AnnotationRecord> records;  // sorted by with-object frame id
  int valid = 0;
  int invalid = 0;
};

/// Triangulates each pair's without-object frame, gates it, and transfers the
/// labels to the with-object frame's views. Writes out/annotations.json.
AnnotateSummary run_annotate_pair(const PipelineConfig& config, std::ostream& log);

/// In-memory core of run_annotate_pair.
AnnotateSummary annotate_pairs(const DetectionSet& detections, const std::vector<CameraModel>& cameras,
                               std::optional<double> gate_threshold, int jobs);

// -------------------------------------------------------------------- augment

/// Every *.ppm in `input_dir` (sorted by name, with optional <stem>.json
/// keypoints) is augmented with randomness keyed by its sorted position.
/// Backgrounds come from config.backgrounds (*.ppm). Outputs mirror the
/// input names under config.out.
int run_augment(const PipelineConfig& config, const AugmentConfig& augment, const fs::path& input_dir,
                std::ostream& log);

// --------------------------------------------------------------------- detect

struct DetectSummary {
  HoiTimeline timeline;
  std::vector<Segment> segments;
  int window = 1;
  int missing_frames = 0;
};

/// Manifest-driven per-frame fusion, then smoothing. Writes out/timeline.csv,
/// out/segments.json, and out/rois.json when locator heatmaps and crop_side
/// are given.
DetectSummary run_detect(const PipelineConfig& config, std::ostream& log);

/// Re-smooths an existing timeline.csv at config.fps.
DetectSummary run_segment(const PipelineConfig& config, const fs::path& timeline_csv, std::ostream& log);

// ---------------------------------------------------------------- evaluation

struct SegReport {
  SegmentScores scores;
  double frame_acc = 0.0;
};

/// frames == 0 paints both lists up to the largest end frame.
SegReport evaluate_segments(const std::vector<Segment>& pred, const std::vector<Segment>& gt, double iou,
                            std::size_t frames = 0);

/// Writes report.json {"precision","recall","f1","frame_acc"} to `report_path`.
SegReport run_report(const fs::path& pred, const fs::path& gt, double iou, std::size_t frames,
                     const fs::path& report_path);

struct PckReport {
  PckCurve curve;
  double auc = 0.0;
  /// Mean distance in the input's unit (pixels, or millimeters for 3D).
  double mean_error = 0.0;
  bool three_d = false;
};

/// Accepts keypoint files ({"keypoints"}), gt.json-style 3D frames, or
/// annotations.json as the prediction. 3D errors are in millimeters and are
/// matched by frame id. Writes the curve CSV and an AUC JSON next to it.
PckReport run_eval_pck(const fs::path& pred, const fs::path& gt, double max_threshold, int steps,
                       const fs::path& curve_csv, const fs::path& auc_json);

// --------------------------------------------------------------- train-fusion

struct TrainSummary {
  TrainResult result;
  double train_accuracy = 0.0;
};

std::vector<LabeledFeatures> load_fusion_dataset(const fs::path& manifest_path, const AblationFlags& ablate);

/// Trains on the labeled manifest at config.manifest and writes config.model.
TrainSummary run_train_fusion(const PipelineConfig& config, const TrainOptions& options, std::ostream& log);

}  // namespace egohoi
