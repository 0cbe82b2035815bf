// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/synth_rig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "egohoi/error.hpp"
#include "egohoi/rng.hpp"

namespace egohoi {

namespace {

constexpr std::uint64_t kOpCameras = 0xca;
constexpr std::uint64_t kOpJoints = 0x10;
constexpr std::uint64_t kOpRenderWithout = 0x20;
constexpr std::uint64_t kOpRenderWith = 0x21;
constexpr std::uint64_t kOpFusion = 0xf0;

Vec3 random_unit(CounterRng& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

double reflect_into(double x, double half) {
  // Fold x back into [-half, half].
  const double period = 4.0 * half;
  double y = std::fmod(x + half, period);
  if (y < 0) y += period;
  return y <= 2.0 * half ? y - half : 3.0 * half - y;
}

Joints3D random_chain(CounterRng& rng, int joints, double extent) {
  const double half = extent / 2.0;
  Joints3D out;
  out.reserve(joints);
  Vec3 p(rng.uniform(-half / 2, half / 2), rng.uniform(-half / 2, half / 2), rng.uniform(-half / 2, half / 2));
  out.push_back(p);
  for (int i = 1; i < joints; ++i) {
    const Vec3 step = random_unit(rng) * rng.uniform(0.02, 0.04);
    Vec3 next = p + step;
    for (int a = 0; a < 3; ++a) next[a] = reflect_into(next[a], half);
    out.push_back(next);
    p = next;
  }
  return out;
}

Joint2D noisy_observation(const CameraModel& cam, const Vec3& joint, double sigma, double dropout, CounterRng& rng) {
  const Projection p = project(cam, joint);
  const double du = sigma > 0.0 ? rng.normal(0.0, sigma) : 0.0;
  const double dv = sigma > 0.0 ? rng.normal(0.0, sigma) : 0.0;
  const bool dropped = dropout > 0.0 && rng.uniform() < dropout;
  Joint2D obs{p.u + du, p.v + dv, 0.0};
  if (!dropped) {
    const double err2 = du * du + dv * dv;
    obs.confidence = sigma > 0.0 ? std::exp(-err2 / (2.0 * 9.0 * sigma * sigma)) : 1.0;
  }
  return obs;
}

void fill_disk(MaskRaster& mask, const Vec2& c, double r) {
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if ((Vec2(x, y) - c).squaredNorm() <= r * r) mask.set(x, y, true);
    }
  }
}

void fill_ellipse(MaskRaster& mask, const Vec2& c, double rx, double ry) {
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const double dx = (x - c.x()) / rx;
      const double dy = (y - c.y()) / ry;
      if (dx * dx + dy * dy <= 1.0) mask.set(x, y, true);
    }
  }
}

}  // namespace

SynthScene generate_scene(std::uint64_t seed, const RigOptions& options) {
  if (options.cameras < 2) throw Error(ErrorCode::kInvalidArgument, "a rig needs at least two cameras");
  if (options.frames < 0 || options.joints < 1) throw Error(ErrorCode::kInvalidArgument, "invalid frame/joint count");
  if (!(options.radius_min > 0.0) || options.radius_max < options.radius_min) {
    throw Error(ErrorCode::kInvalidArgument, "invalid camera radius range");
  }

  SynthScene scene;
  scene.seed = seed;
  scene.options = options;

  CounterRng cam_rng(seed, 0, kOpCameras);
  const double min_sep = options.min_camera_separation_deg * std::numbers::pi / 180.0;
  std::vector<Vec3> directions;
  while (static_cast<int>(directions.size()) < options.cameras) {
    const Vec3 d = random_unit(cam_rng);
    const bool far_enough = std::all_of(directions.begin(), directions.end(), [&](const Vec3& o) {
      return std::acos(std::clamp(d.dot(o), -1.0, 1.0)) >= min_sep;
    });
    if (far_enough) directions.push_back(d);
  }
  for (int i = 0; i < options.cameras; ++i) {
    const double radius = cam_rng.uniform(options.radius_min, options.radius_max);
    CameraModel cam;
    cam.id = "cam" + std::to_string(i);
    cam.fx = cam.fy = options.focal;
    cam.width = options.width;
    cam.height = options.height;
    cam.cx = options.width / 2.0;
    cam.cy = options.height / 2.0;
    cam.set_extrinsics(look_at(directions[i] * radius, Vec3::Zero(), Vec3::UnitZ()));
    scene.cameras.push_back(cam);
  }

  for (int f = 0; f < options.frames; ++f) {
    CounterRng rng(seed, static_cast<std::uint64_t>(f), kOpJoints);
    scene.poses.push_back(random_chain(rng, options.joints, options.hand_extent));
    scene.pairs.push_back({2 * static_cast<std::uint64_t>(f) + 1, 2 * static_cast<std::uint64_t>(f),
                           static_cast<std::size_t>(f)});
    std::vector<BoundingBox> boxes;
    for (const auto& cam : scene.cameras) {
      BoundingBox b{1e300, 1e300, -1e300, -1e300};
      for (const auto& j : scene.poses.back()) {
        const Projection p = project(cam, j);
        b.x0 = std::min(b.x0, p.u);
        b.y0 = std::min(b.y0, p.v);
        b.x1 = std::max(b.x1, p.u);
        b.y1 = std::max(b.y1, p.v);
      }
      boxes.push_back(b);
    }
    scene.hand_boxes.push_back(std::move(boxes));
  }
  return scene;
}

RenderedScene render_detections(const SynthScene& scene, const RenderOptions& options) {
  if (options.noise_sigma < 0.0 || !(options.dropout >= 0.0 && options.dropout < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise must be >= 0 and dropout in [0,1)");
  }
  const double sigma_with =
      options.noise_sigma_with_object >= 0.0 ? options.noise_sigma_with_object : 2.0 * options.noise_sigma;
  const double dropout_with = options.dropout_with_object >= 0.0
                                  ? options.dropout_with_object
                                  : std::max(options.dropout, std::min(0.95, 2.0 * options.dropout));
  if (sigma_with < options.noise_sigma || dropout_with < options.dropout || dropout_with >= 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "with-object frames must be at least as noisy as object-free frames");
  }

  RenderedScene out;
  out.pairs = scene.pairs;
  for (const auto& pair : scene.pairs) {
    const Joints3D& joints = scene.poses[pair.pose_index];
    for (const bool with_object : {false, true}) {
      RenderedFrame frame;
      frame.frame = with_object ? pair.with_object : pair.without_object;
      const double sigma = with_object ? sigma_with : options.noise_sigma;
      const double dropout = with_object ? dropout_with : options.dropout;
      for (std::size_t c = 0; c < scene.cameras.size(); ++c) {
        CounterRng rng(scene.seed, frame.frame, (with_object ? kOpRenderWith : kOpRenderWithout) + 0x100 * c);
        Detection2D det{scene.cameras[c].id, {}};
        det.joints.reserve(joints.size());
        for (const auto& j : joints) det.joints.push_back(noisy_observation(scene.cameras[c], j, sigma, dropout, rng));
        frame.views.push_back(std::move(det));
      }
      out.frames.push_back(std::move(frame));
    }
  }
  std::sort(out.frames.begin(), out.frames.end(),
            [](const RenderedFrame& a, const RenderedFrame& b) { return a.frame < b.frame; });
  return out;
}

std::vector<std::vector<CornerObservation>> render_cube_corners(const SynthScene& scene, const CubeSpec& cube) {
  std::vector<std::vector<CornerObservation>> out;
  for (const auto& cam : scene.cameras) {
    std::vector<CornerObservation> obs;
    for (int i = 0; i < 8; ++i) {
      const Projection p = project(cam, cube.corner(i));
      obs.push_back({i, p.u, p.v, 1.0});
    }
    out.push_back(std::move(obs));
  }
  return out;
}

FusionSample generate_fusion_sample(std::uint64_t seed, std::uint64_t index, int label, int mask_size, int joints) {
  if (mask_size < 8) throw Error(ErrorCode::kInvalidArgument, "mask size must be at least 8");
  CounterRng rng(seed, index, kOpFusion);
  const double s = mask_size;
  FusionSample sample{HeatmapStack(kPoseHeatmapSize, kPoseHeatmapSize, joints), MaskRaster(mask_size, mask_size, MaskRole::kHand),
                      MaskRaster(mask_size, mask_size, MaskRole::kObject), label ? 1 : 0};

  const Vec2 hand_center(s / 2 + rng.uniform(-0.1, 0.1) * s, s / 2 + rng.uniform(-0.1, 0.1) * s);
  const double rx = rng.uniform(0.15, 0.25) * s;
  const double ry = rng.uniform(0.15, 0.25) * s;
  fill_ellipse(sample.hand, hand_center, rx, ry);

  const double scale = static_cast<double>(kPoseHeatmapSize) / s;
  for (int j = 0; j < joints; ++j) {
    const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(rng.uniform());
    const Vec2 p = hand_center + Vec2(r * rx * std::cos(a), r * ry * std::sin(a));
    splat_gaussian(sample.pose, j, p * scale, 1.0);
  }

  const double object_radius = rng.uniform(0.08, 0.15) * s;
  const double direction = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const Vec2 dir(std::cos(direction), std::sin(direction));
  if (sample.label == 1) {
    const double reach = rng.uniform(0.3, 0.9) * std::min(rx, ry);
    fill_disk(sample.object, hand_center + reach * dir, object_radius);
  } else if (rng.uniform() < 0.5) {
    const double gap = std::max(rx, ry) + object_radius + rng.uniform(0.05, 0.15) * s;
    fill_disk(sample.object, hand_center + gap * dir, object_radius);
  }
  return sample;
}

std::vector<FusionSample> generate_fusion_suite(std::uint64_t seed, int count, int mask_size) {
  std::vector<FusionSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(generate_fusion_sample(seed, static_cast<std::uint64_t>(i), i % 2, mask_size));
  return out;
}

std::vector<LabeledFeatures> to_features(const std::vector<FusionSample>& samples, const AblationFlags& ablate) {
  std::vector<LabeledFeatures> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({extract_features(s.pose, s.hand, s.object, ablate), s.label});
  return out;
}

}  // namespace egohoi
