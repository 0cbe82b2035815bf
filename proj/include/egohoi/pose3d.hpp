// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "egohoi/camera.hpp"
#include "egohoi/lm_solver.hpp"

namespace egohoi {

inline constexpr int kDefaultJointCount = 21;

struct Joint2D {
  double u = 0.0;
  double v = 0.0;
  double confidence = 0.0;
};

/// 2D joint detections of one hand in one view.
struct Detection2D {
  std::string camera_id;
  std::vector<Joint2D> joints;
};

using Joints3D = std::vector<Vec3>;

struct TriangulationResult {
  Joints3D joints;
  /// One report per joint; flagged joints carry a default report.
  std::vector<LmReport> reports;
  /// Joints seen with positive confidence in fewer than two views. Their
  /// position comes from `init` when given, otherwise it is the centroid of
  /// the triangulated joints; they do not contribute to `loss`.
  std::vector<bool> flagged;
  /// sum over joints and views of w^2 * |detected - projected|^2.
  double loss = 0.0;
  /// Number of (joint, view) observations with positive confidence that
  /// entered the loss.
  int observation_count = 0;

  bool any_flagged() const;
};

/// Per-joint defaults. Noisy views leave a nonzero residual, so LM converges
/// only linearly near the optimum; the tolerances sit near roundoff so the
/// returned point is stationary, not just close.
inline LmOptions triangulation_lm_options() {
  LmOptions o;
  o.cost_tol = 1e-16;
  o.step_tol = 1e-14;
  return o;
}

/// Confidence-weighted multi-view triangulation, solved per joint with LM.
/// `detections[i]` pairs with `cameras[i]`.
///
/// Errors: kInsufficientViews (fewer than two views, or no joint seen in two
/// views), kDegenerateRays, kNoConvergence, kInvalidArgument for malformed
/// input.
TriangulationResult triangulate(const std::vector<Detection2D>& detections,
                                const std::vector<CameraModel>& cameras,
                                const std::optional<Joints3D>& init = std::nullopt,
                                const LmOptions& options = triangulation_lm_options());

/// Least-squares residuals for one joint: [w (u_proj - u), w (v_proj - v)]
/// per view with w > 0. Exposed for optimality checks.
LmProblem joint_problem(const std::vector<Detection2D>& detections, const std::vector<CameraModel>& cameras,
                        std::size_t joint_index);

/// Midpoint of the shortest segment between the two viewing rays.
/// Throws kDegenerateRays when the rays are parallel within 1e-9.
Vec3 two_view_midpoint(const CameraModel& a, const Vec2& pa, const CameraModel& b, const Vec2& pb);

/// valid iff loss < threshold. Negative threshold is rejected.
bool gate_annotation(double loss, double threshold);

/// Threshold equivalent to a 3 px weighted RMS per observation in the
/// squared loss domain: 9 * observation_count.
double default_gate_threshold(int observation_count);

struct Label2D {
  double u = 0.0;
  double v = 0.0;
  bool visible = false;
};

struct ViewLabels {
  std::string camera_id;
  std::vector<Label2D> labels;
};

/// Project joints into every camera. Joints at non-positive depth or outside
/// the image are flagged invisible (behind-camera labels are left at 0,0).
std::vector<ViewLabels> transfer_labels(const Joints3D& joints, const std::vector<CameraModel>& cameras);

struct AnnotationRecord {
  std::uint64_t frame = 0;
  Joints3D joints3d;
  double loss = 0.0;
  bool valid = false;
  std::vector<ViewLabels> labels2d;
};

}  // namespace egohoi
