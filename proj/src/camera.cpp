// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/camera.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>

#include "egohoi/error.hpp"

namespace egohoi {

namespace {

void check_rotation(const Mat3& r, const std::string& what) {
  if (!r.allFinite()) throw Error(ErrorCode::kInvalidArgument, what + " rotation is not finite");
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho >= 1e-9 || r.determinant() <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, what + " rotation is not a proper orthonormal matrix");
  }
}

}  // namespace

Pose6D Pose6D::inverse() const {
  const Mat3 rt = rotation.transpose();
  return {rt, -rt * translation};
}

Pose6D Pose6D::compose(const Pose6D& rhs) const {
  return {rotation * rhs.rotation, rotation * rhs.translation + translation};
}

void Pose6D::validate() const {
  check_rotation(rotation, "pose");
  if (!translation.allFinite()) throw Error(ErrorCode::kInvalidArgument, "pose translation is not finite");
}

void CameraModel::validate() const {
  const std::string what = "camera '" + id + "'";
  if (!(fx > 0.0) || !(fy > 0.0)) throw Error(ErrorCode::kInvalidArgument, what + " focal lengths must be positive");
  if (width <= 0 || height <= 0) throw Error(ErrorCode::kInvalidArgument, what + " image size must be positive");
  if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height)) {
    throw Error(ErrorCode::kInvalidArgument, what + " principal point outside the image");
  }
  check_rotation(rotation, what);
  if (!translation.allFinite()) throw Error(ErrorCode::kInvalidArgument, what + " translation is not finite");
}

Projection project(const CameraModel& camera, const Vec3& world_point) {
  const Vec3 p = camera.to_camera(world_point);
  if (!(p.z() > kMinDepth)) {
    throw Error(ErrorCode::kNonPositiveDepth,
                "point at camera-frame depth " + std::to_string(p.z()) + " in camera '" + camera.id + "'");
  }
  return {camera.fx * p.x() / p.z() + camera.cx, camera.fy * p.y() / p.z() + camera.cy, p.z()};
}

Eigen::Matrix<double, 2, 3> projection_jacobian(const CameraModel& camera, const Vec3& world_point) {
  const Vec3 p = camera.to_camera(world_point);
  if (!(p.z() > kMinDepth)) {
    throw Error(ErrorCode::kNonPositiveDepth, "jacobian at non-positive depth in camera '" + camera.id + "'");
  }
  const double iz = 1.0 / p.z();
  Eigen::Matrix<double, 2, 3> d;
  d << camera.fx * iz, 0.0, -camera.fx * p.x() * iz * iz,
       0.0, camera.fy * iz, -camera.fy * p.y() * iz * iz;
  return d * camera.rotation;
}

Pose6D camera_from_cube_pose(const Pose6D& camera_pose) {
  camera_pose.validate();
  return camera_pose.inverse();
}

Mat3 rotation_from_axis_angle(const Vec3& axis_angle) {
  const double angle = axis_angle.norm();
  if (angle < 1e-12) {
    // First-order expansion, re-projected to stay on SO(3).
    Mat3 skew;
    skew << 0, -axis_angle.z(), axis_angle.y(),
            axis_angle.z(), 0, -axis_angle.x(),
            -axis_angle.y(), axis_angle.x(), 0;
    return orthonormalize(Mat3::Identity() + skew);
  }
  return Eigen::AngleAxisd(angle, axis_angle / angle).toRotationMatrix();
}

Vec3 axis_angle_from_rotation(const Mat3& rotation) {
  const Eigen::AngleAxisd aa(rotation);
  return aa.axis() * aa.angle();
}

Mat3 orthonormalize(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

double rotation_angle_between(const Mat3& a, const Mat3& b) {
  const double c = std::clamp(((a.transpose() * b).trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

Pose6D look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
  const Vec3 z = (target - eye).normalized();
  Vec3 x = z.cross(up);
  if (x.norm() < 1e-6) x = z.cross(Vec3::UnitX());
  if (x.norm() < 1e-6) x = z.cross(Vec3::UnitY());
  x.normalize();
  const Vec3 y = z.cross(x);
  Mat3 r;
  r.row(0) = x.transpose();
  r.row(1) = y.transpose();
  r.row(2) = z.transpose();
  r = orthonormalize(r);
  return {r, -r * eye};
}

}  // namespace egohoi
