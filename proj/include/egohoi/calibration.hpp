// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "egohoi/camera.hpp"
#include "egohoi/lm_solver.hpp"

namespace egohoi {

/// Calibration cube centered on the world origin, faces axis-aligned.
struct CubeSpec {
  double edge_m = 0.1;

  /// Corner i has sign (+/-) on x, y, z from bits 0, 1, 2 of i.
  std::array<Vec3, 8> corners() const;
  Vec3 corner(int index) const;
};

struct CornerObservation {
  int corner = 0;
  double u = 0.0;
  double v = 0.0;
  double confidence = 1.0;
};

struct CalibrationOptions {
  int restarts = 8;
  std::uint64_t seed = 0;
  int max_recenter_rounds = 10;
  LmOptions lm;
};

struct CalibrationResult {
  /// Camera pose in the cube frame (camera -> cube).
  Pose6D camera_pose;
  /// World (cube) -> camera, ready for CameraModel::set_extrinsics.
  Pose6D extrinsics;
  LmReport report;
  /// Unweighted RMS pixel distance over the observations.
  double rms_px = 0.0;
  int restart_index = 0;
};

/// Recover a camera's pose relative to the cube from detected cube corners.
/// Only the intrinsics of `intrinsics` are used.
///
/// Each restart starts from a uniformly sampled rotation and a translation
/// back-projected from the observed corner spread, then alternates LM over a
/// local axis-angle update with re-centering of the base rotation. The lowest
/// cost restart wins; ties go to the lower restart index.
///
/// Errors: kInsufficientCorrespondences (< 4 distinct corners or all-zero
/// confidence), kBehindCamera, kNoConvergence.
CalibrationResult estimate_camera_pose(const CameraModel& intrinsics, const CubeSpec& cube,
                                       const std::vector<CornerObservation>& observations,
                                       const CalibrationOptions& options = {});

/// Unweighted RMS reprojection error of cube corners under `extrinsics`.
double corner_rms(const CameraModel& intrinsics, const Pose6D& extrinsics, const CubeSpec& cube,
                  const std::vector<CornerObservation>& observations);

}  // namespace egohoi
