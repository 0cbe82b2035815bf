// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/calibration.hpp"

#include <cmath>
#include <set>

#include "egohoi/error.hpp"
#include "egohoi/rng.hpp"

namespace egohoi {

namespace {

constexpr double kBehindPenalty = 1e6;

Mat3 sample_rotation(CounterRng& rng) {
  // Shoemake's uniform quaternion.
  const double u1 = rng.uniform();
  const double u2 = rng.uniform() * 2.0 * std::numbers::pi;
  const double u3 = rng.uniform() * 2.0 * std::numbers::pi;
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  Eigen::Quaterniond q(a * std::sin(u2), a * std::cos(u2), b * std::sin(u3), b * std::cos(u3));
  return q.normalized().toRotationMatrix();
}

Projection project_with(const CameraModel& k, const Mat3& r, const Vec3& t, const Vec3& x) {
  const Vec3 p = r * x + t;
  return {k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy, p.z()};
}

}  // namespace

std::array<Vec3, 8> CubeSpec::corners() const {
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) out[i] = corner(i);
  return out;
}

Vec3 CubeSpec::corner(int index) const {
  if (index < 0 || index > 7) throw Error(ErrorCode::kInvalidArgument, "cube corner index out of range");
  const double h = edge_m / 2.0;
  return {(index & 1) ? h : -h, (index & 2) ? h : -h, (index & 4) ? h : -h};
}

double corner_rms(const CameraModel& intrinsics, const Pose6D& extrinsics, const CubeSpec& cube,
                  const std::vector<CornerObservation>& observations) {
  if (observations.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& o : observations) {
    const Projection p = project_with(intrinsics, extrinsics.rotation, extrinsics.translation, cube.corner(o.corner));
    sum += (p.u - o.u) * (p.u - o.u) + (p.v - o.v) * (p.v - o.v);
  }
  return std::sqrt(sum / static_cast<double>(observations.size()));
}

CalibrationResult estimate_camera_pose(const CameraModel& intrinsics, const CubeSpec& cube,
                                       const std::vector<CornerObservation>& observations,
                                       const CalibrationOptions& options) {
  if (!(cube.edge_m > 0.0)) throw Error(ErrorCode::kInvalidArgument, "cube edge must be positive");
  if (options.restarts < 1) throw Error(ErrorCode::kInvalidArgument, "at least one restart is required");

  std::set<int> distinct;
  double confidence_sum = 0.0;
  for (const auto& o : observations) {
    if (o.corner < 0 || o.corner > 7) throw Error(ErrorCode::kInvalidArgument, "corner index out of range");
    if (!(o.confidence >= 0.0 && o.confidence <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "corner confidence outside [0,1]");
    }
    distinct.insert(o.corner);
    confidence_sum += o.confidence;
  }
  if (distinct.size() < 4) {
    throw Error(ErrorCode::kInsufficientCorrespondences,
                "need at least 4 distinct cube corners, got " + std::to_string(distinct.size()));
  }
  if (confidence_sum <= 0.0) throw Error(ErrorCode::kInsufficientCorrespondences, "all corner confidences are zero");

  // Translation initializer: centroid ray at a depth matching the observed spread.
  Vec2 centroid = Vec2::Zero();
  for (const auto& o : observations) centroid += Vec2(o.u, o.v);
  centroid /= static_cast<double>(observations.size());
  double spread = 0.0;
  for (const auto& o : observations) spread += (Vec2(o.u, o.v) - centroid).norm();
  spread /= static_cast<double>(observations.size());
  const double depth0 = cube.edge_m * intrinsics.fx / std::max(spread, 1e-6);
  const Vec3 t0 = depth0 * Vec3((centroid.x() - intrinsics.cx) / intrinsics.fx,
                                (centroid.y() - intrinsics.cy) / intrinsics.fy, 1.0);

  std::vector<Vec3> points;
  points.reserve(observations.size());
  for (const auto& o : observations) points.push_back(cube.corner(o.corner));

  bool have_best = false;
  CalibrationResult best;
  for (int restart = 0; restart < options.restarts; ++restart) {
    CounterRng rng(options.seed, 0, static_cast<std::uint64_t>(restart));
    Mat3 base = sample_rotation(rng);
    Vec3 translation = t0;

    LmReport last;
    bool ok = true;
    double initial_cost = -1.0;
    std::vector<double> history;
    int iterations = 0;
    for (int round = 0; round < options.max_recenter_rounds; ++round) {
      LmProblem problem;
      problem.residual = [&](const VectorX& x) {
        const Mat3 r = rotation_from_axis_angle(x.head<3>()) * base;
        const Vec3 t = x.tail<3>();
        VectorX res(2 * static_cast<Eigen::Index>(observations.size()));
        for (std::size_t i = 0; i < observations.size(); ++i) {
          const auto& o = observations[i];
          const Vec3 p = r * points[i] + t;
          if (!(p.z() > kMinDepth)) {
            res[2 * i] = res[2 * i + 1] = kBehindPenalty;
            continue;
          }
          res[2 * i] = o.confidence * (intrinsics.fx * p.x() / p.z() + intrinsics.cx - o.u);
          res[2 * i + 1] = o.confidence * (intrinsics.fy * p.y() / p.z() + intrinsics.cy - o.v);
        }
        return res;
      };
      VectorX x0 = VectorX::Zero(6);
      x0.tail<3>() = translation;
      try {
        last = lm_solve(problem, x0, options.lm);
      } catch (const Error&) {
        ok = false;
        break;
      }
      if (initial_cost < 0.0) initial_cost = last.initial_cost;
      history.insert(history.end(), last.cost_history.begin() + (history.empty() ? 0 : 1), last.cost_history.end());
      iterations += last.iterations;
      const Vec3 delta = last.params.head<3>();
      base = orthonormalize(rotation_from_axis_angle(delta) * base);
      translation = last.params.tail<3>();
      if (!last.converged || delta.norm() < 1e-12 || last.iterations <= 1) break;
    }
    if (!ok || !last.converged) continue;

    const double cost = last.final_cost;
    if (!have_best || cost < best.report.final_cost) {
      have_best = true;
      best.extrinsics = {base, translation};
      best.report = last;
      best.report.initial_cost = initial_cost;
      best.report.cost_history = history;
      best.report.iterations = iterations;
      best.report.params = VectorX(6);
      best.report.params << axis_angle_from_rotation(base), translation;
      best.restart_index = restart;
    }
  }
  if (!have_best) throw Error(ErrorCode::kNoConvergence, "no calibration restart converged");

  for (const auto& p : points) {
    if (!((best.extrinsics.rotation * p + best.extrinsics.translation).z() > kMinDepth)) {
      throw Error(ErrorCode::kBehindCamera, "recovered pose places an observed cube corner behind the camera");
    }
  }
  best.camera_pose = best.extrinsics.inverse();
  best.rms_px = corner_rms(intrinsics, best.extrinsics, cube, observations);
  return best;
}

}  // namespace egohoi
