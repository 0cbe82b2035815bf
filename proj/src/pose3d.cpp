// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/pose3d.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "egohoi/error.hpp"

namespace egohoi {

namespace {

constexpr double kBehindPenalty = 1e6;

struct WeightedView {
  const CameraModel* camera;
  Joint2D obs;
};

std::vector<WeightedView> views_for_joint(const std::vector<Detection2D>& detections,
                                          const std::vector<CameraModel>& cameras, std::size_t joint) {
  std::vector<WeightedView> out;
  for (std::size_t v = 0; v < detections.size(); ++v) {
    const Joint2D& j = detections[v].joints[joint];
    if (j.confidence > 0.0) out.push_back({&cameras[v], j});
  }
  return out;
}

LmProblem make_problem(std::vector<WeightedView> views) {
  LmProblem problem;
  problem.residual = [views](const VectorX& x) {
    const Vec3 p = x.head<3>();
    VectorX r(2 * static_cast<Eigen::Index>(views.size()));
    for (std::size_t i = 0; i < views.size(); ++i) {
      const CameraModel& cam = *views[i].camera;
      const Vec3 pc = cam.to_camera(p);
      if (!(pc.z() > kMinDepth)) {
        r[2 * i] = r[2 * i + 1] = kBehindPenalty;
        continue;
      }
      const double w = views[i].obs.confidence;
      r[2 * i] = w * (cam.fx * pc.x() / pc.z() + cam.cx - views[i].obs.u);
      r[2 * i + 1] = w * (cam.fy * pc.y() / pc.z() + cam.cy - views[i].obs.v);
    }
    return r;
  };
  problem.jacobian = [views](const VectorX& x) {
    const Vec3 p = x.head<3>();
    MatrixX jac = MatrixX::Zero(2 * static_cast<Eigen::Index>(views.size()), 3);
    for (std::size_t i = 0; i < views.size(); ++i) {
      const CameraModel& cam = *views[i].camera;
      if (!(cam.to_camera(p).z() > kMinDepth)) continue;
      jac.block<2, 3>(2 * static_cast<Eigen::Index>(i), 0) = views[i].obs.confidence * projection_jacobian(cam, p);
    }
    return jac;
  };
  return problem;
}

// Near the optimum the cost is flat to roundoff, so LM's cost test stops
// with the gradient still well above zero. Undamped Gauss-Newton steps that
// shrink the gradient finish the job; the cost may move only at roundoff level.
void polish(const LmProblem& problem, LmReport& report) {
  VectorX x = report.params;
  VectorX r = problem.residual(x);
  MatrixX jac = problem.jacobian(x);
  VectorX g = jac.transpose() * r;
  for (int i = 0; i < 8 && g.norm() > 0.0; ++i) {
    const Eigen::LDLT<MatrixX> ldlt(jac.transpose() * jac);
    if (ldlt.info() != Eigen::Success) break;
    const VectorX x_new = x + ldlt.solve(-g);
    const VectorX r_new = problem.residual(x_new);
    if (!r_new.allFinite()) break;
    const MatrixX jac_new = problem.jacobian(x_new);
    const VectorX g_new = jac_new.transpose() * r_new;
    const double slack = 1e-12 * (1.0 + r.squaredNorm());
    if (!(g_new.norm() < g.norm()) || r_new.squaredNorm() > r.squaredNorm() + slack) break;
    x = x_new;
    r = r_new;
    jac = jac_new;
    g = g_new;
  }
  report.params = x;
  report.final_cost = r.squaredNorm();
}

void validate_inputs(const std::vector<Detection2D>& detections, const std::vector<CameraModel>& cameras) {
  if (detections.size() != cameras.size()) {
    throw Error(ErrorCode::kInvalidArgument, "detections and cameras must pair one-to-one");
  }
  if (detections.size() < 2) {
    throw Error(ErrorCode::kInsufficientViews, "triangulation needs at least two views");
  }
  const std::size_t k = detections.front().joints.size();
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "detections carry no joints");
  for (std::size_t v = 0; v < detections.size(); ++v) {
    if (detections[v].joints.size() != k) {
      throw Error(ErrorCode::kInvalidArgument, "view '" + detections[v].camera_id + "' has a different joint count");
    }
    for (const auto& j : detections[v].joints) {
      if (!(j.confidence >= 0.0 && j.confidence <= 1.0) || !std::isfinite(j.u) || !std::isfinite(j.v)) {
        throw Error(ErrorCode::kInvalidArgument, "view '" + detections[v].camera_id + "' has an invalid joint");
      }
    }
  }
}

}  // namespace

bool TriangulationResult::any_flagged() const {
  return std::find(flagged.begin(), flagged.end(), true) != flagged.end();
}

Vec3 two_view_midpoint(const CameraModel& a, const Vec2& pa, const CameraModel& b, const Vec2& pb) {
  auto ray = [](const CameraModel& c, const Vec2& px) {
    const Vec3 dir_cam((px.x() - c.cx) / c.fx, (px.y() - c.cy) / c.fy, 1.0);
    return Vec3((c.rotation.transpose() * dir_cam).normalized());
  };
  const Vec3 oa = a.center();
  const Vec3 ob = b.center();
  const Vec3 da = ray(a, pa);
  const Vec3 db = ray(b, pb);
  const double dd = da.dot(db);
  const double denom = 1.0 - dd * dd;
  if (da.cross(db).norm() < 1e-9 || denom < 1e-18) {
    throw Error(ErrorCode::kDegenerateRays, "initializing rays are parallel");
  }
  const Vec3 w = oa - ob;
  const double s = (dd * db.dot(w) - da.dot(w)) / denom;
  const double t = (db.dot(w) - dd * da.dot(w)) / denom;
  return 0.5 * ((oa + s * da) + (ob + t * db));
}

LmProblem joint_problem(const std::vector<Detection2D>& detections, const std::vector<CameraModel>& cameras,
                        std::size_t joint_index) {
  validate_inputs(detections, cameras);
  return make_problem(views_for_joint(detections, cameras, joint_index));
}

TriangulationResult triangulate(const std::vector<Detection2D>& detections, const std::vector<CameraModel>& cameras,
                                const std::optional<Joints3D>& init, const LmOptions& options) {
  validate_inputs(detections, cameras);
  const std::size_t k = detections.front().joints.size();
  if (init && init->size() != k) throw Error(ErrorCode::kInvalidArgument, "initial joints have the wrong count");

  TriangulationResult result;
  result.joints.assign(k, Vec3::Zero());
  result.reports.resize(k);
  result.flagged.assign(k, false);

  std::size_t solved = 0;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<WeightedView> views = views_for_joint(detections, cameras, j);
    if (views.size() < 2) {
      result.flagged[j] = true;
      continue;
    }
    Vec3 start;
    if (init) {
      start = (*init)[j];
    } else {
      // Two most confident views; stable sort keeps the lower view index on ties.
      std::vector<std::size_t> order(views.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return views[a].obs.confidence > views[b].obs.confidence;
      });
      const auto& va = views[order[0]];
      const auto& vb = views[order[1]];
      start = two_view_midpoint(*va.camera, {va.obs.u, va.obs.v}, *vb.camera, {vb.obs.u, vb.obs.v});
    }
    const LmProblem problem = make_problem(views);
    LmReport report = lm_solve(problem, start, options);
    if (!report.converged) {
      throw Error(ErrorCode::kNoConvergence, "joint " + std::to_string(j) + " did not converge");
    }
    polish(problem, report);
    result.joints[j] = report.params.head<3>();
    result.loss += report.final_cost;
    result.observation_count += static_cast<int>(views.size());
    result.reports[j] = std::move(report);
    ++solved;
  }
  if (solved == 0) throw Error(ErrorCode::kInsufficientViews, "no joint is observed in two or more views");

  Vec3 centroid = Vec3::Zero();
  for (std::size_t j = 0; j < k; ++j) {
    if (!result.flagged[j]) centroid += result.joints[j];
  }
  centroid /= static_cast<double>(solved);
  for (std::size_t j = 0; j < k; ++j) {
    if (result.flagged[j]) result.joints[j] = init ? (*init)[j] : centroid;
  }
  return result;
}

bool gate_annotation(double loss, double threshold) {
  if (!(threshold >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "gate threshold must be non-negative");
  return loss < threshold;
}

double default_gate_threshold(int observation_count) { return 9.0 * static_cast<double>(observation_count); }

std::vector<ViewLabels> transfer_labels(const Joints3D& joints, const std::vector<CameraModel>& cameras) {
  std::vector<ViewLabels> out;
  out.reserve(cameras.size());
  for (const auto& cam : cameras) {
    ViewLabels view{cam.id, {}};
    view.labels.reserve(joints.size());
    for (const auto& j : joints) {
      const Vec3 pc = cam.to_camera(j);
      if (!(pc.z() > kMinDepth)) {
        view.labels.push_back({0.0, 0.0, false});
        continue;
      }
      const Projection p = project(cam, j);
      view.labels.push_back({p.u, p.v, cam.in_image(p.u, p.v)});
    }
    out.push_back(std::move(view));
  }
  return out;
}

}  // namespace egohoi
