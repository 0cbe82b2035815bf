// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "egohoi/calibration.hpp"
#include "egohoi/camera.hpp"
#include "egohoi/heatmap.hpp"
#include "egohoi/hoi_fusion.hpp"
#include "egohoi/pose3d.hpp"
#include "egohoi/raster.hpp"

namespace egohoi {

struct RigOptions {
  int cameras = 3;
  int frames = 1;
  int joints = kDefaultJointCount;
  int width = 640;
  int height = 480;
  double focal = 500.0;
  double radius_min = 0.5;
  double radius_max = 0.8;
  /// Side of the cube the joint chain lives in, meters.
  double hand_extent = 0.2;
  double min_camera_separation_deg = 20.0;
};

/// One captured hand pose, recorded twice: with the object in hand and again
/// after the object is removed. Both frames share the same joints.
struct FramePair {
  std::uint64_t with_object = 0;
  std::uint64_t without_object = 0;
  std::size_t pose_index = 0;
};

struct SynthScene {
  std::uint64_t seed = 0;
  RigOptions options;
  std::vector<CameraModel> cameras;
  std::vector<Joints3D> poses;
  std::vector<FramePair> pairs;
  /// hand_boxes[pose][camera]: bounding box of the projected joints.
  std::vector<std::vector<BoundingBox>> hand_boxes;
};

/// Cameras on a sphere around the hand looking at the origin; joints a random
/// connected chain inside a `hand_extent` cube. Deterministic per seed.
/// Throws kInvalidArgument for fewer than two cameras.
SynthScene generate_scene(std::uint64_t seed, const RigOptions& options = {});

struct RenderOptions {
  double noise_sigma = 0.0;
  double dropout = 0.0;
  /// With-object frames are harder to detect: noise and dropout at least as
  /// high as the object-free set. Negative means twice the object-free value.
  double noise_sigma_with_object = -1.0;
  double dropout_with_object = -1.0;
};

struct RenderedFrame {
  std::uint64_t frame = 0;
  /// One detection per camera, same order as the scene cameras.
  std::vector<Detection2D> views;
};

struct RenderedScene {
  std::vector<RenderedFrame> frames;  // sorted by frame id
  std::vector<FramePair> pairs;
};

/// Detections = projections + iid Gaussian noise; dropped joints get zero
/// confidence, others exp(-err^2 / (2 (3 sigma)^2)).
RenderedScene render_detections(const SynthScene& scene, const RenderOptions& options);

/// Exact projections of the cube corners for every camera (confidence 1).
std::vector<std::vector<CornerObservation>> render_cube_corners(const SynthScene& scene, const CubeSpec& cube);

struct FusionSample {
  HeatmapStack pose;
  MaskRaster hand;
  MaskRaster object;
  int label = 0;
};

/// Synthetic interaction crop: a hand blob with pose heatmaps drawn from the
/// same distribution for both labels, plus an object blob that overlaps the
/// hand for label 1 and is either absent or held apart from it for label 0.
FusionSample generate_fusion_sample(std::uint64_t seed, std::uint64_t index, int label, int mask_size = 64,
                                    int joints = kDefaultJointCount);

/// Balanced set of `count` samples, labels alternating.
std::vector<FusionSample> generate_fusion_suite(std::uint64_t seed, int count, int mask_size = 64);

std::vector<LabeledFeatures> to_features(const std::vector<FusionSample>& samples, const AblationFlags& ablate = {});

}  // namespace egohoi
