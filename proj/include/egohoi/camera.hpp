// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace egohoi {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kMinDepth = 1e-9;

/// Rigid transform x -> rotation * x + translation.
struct Pose6D {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose6D identity() { return {}; }

  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }
  Pose6D inverse() const;
  /// (*this) after `rhs`: x -> this(rhs(x)).
  Pose6D compose(const Pose6D& rhs) const;

  /// Throws kInvalidArgument unless the rotation is orthonormal with det +1.
  void validate() const;
};

/// Pinhole camera. Extrinsics map world (cube frame) points to the camera
/// frame; translation is in meters.
struct CameraModel {
  std::string id;
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Pose6D extrinsics() const { return {rotation, translation}; }
  void set_extrinsics(const Pose6D& pose) {
    rotation = pose.rotation;
    translation = pose.translation;
  }
  Vec3 to_camera(const Vec3& world) const { return rotation * world + translation; }
  /// Optical center in world coordinates.
  Vec3 center() const { return -rotation.transpose() * translation; }
  bool in_image(double u, double v) const { return u >= 0 && v >= 0 && u < width && v < height; }

  void validate() const;
};

struct Projection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

/// Throws kNonPositiveDepth when the camera-frame depth is <= 1e-9.
Projection project(const CameraModel& camera, const Vec3& world_point);

/// d(u,v)/d(world point) at `world_point`, 2x3. Same depth precondition as project().
Eigen::Matrix<double, 2, 3> projection_jacobian(const CameraModel& camera, const Vec3& world_point);

/// `camera_pose` is the camera's pose in the cube frame (camera -> cube).
/// The returned extrinsics map cube-frame points into the camera frame.
Pose6D camera_from_cube_pose(const Pose6D& camera_pose);

Mat3 rotation_from_axis_angle(const Vec3& axis_angle);
Vec3 axis_angle_from_rotation(const Mat3& rotation);
/// Nearest rotation in the Frobenius sense (SVD projection onto SO(3)).
Mat3 orthonormalize(const Mat3& m);
/// Geodesic angle between two rotations, radians.
double rotation_angle_between(const Mat3& a, const Mat3& b);

/// World -> camera rotation/translation for a camera at `eye` looking at
/// `target`, image y axis roughly opposite to `up`.
Pose6D look_at(const Vec3& eye, const Vec3& target, const Vec3& up);

}  // namespace egohoi
