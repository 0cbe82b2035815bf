// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "egohoi/error.hpp"

namespace egohoi {

namespace {

// Operation indices for per-frame random streams.
constexpr std::uint64_t kOpBackground = 1;
constexpr std::uint64_t kOpOcclusion = 2;
constexpr std::uint64_t kOpPhotometric = 3;

std::array<std::uint8_t, 3> random_color(CounterRng& rng) {
  return {static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
          static_cast<std::uint8_t>(rng.below(256))};
}

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

void check_range(double lo, double hi, const char* what) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::kInvalidArgument, std::string("augment config: invalid range for ") + what);
  }
}

}  // namespace

void AugmentConfig::validate() const {
  check_range(green.h_lo, green.h_hi, "hue");
  check_range(line_width_min, line_width_max, "line width");
  check_range(circle_radius_min, circle_radius_max, "circle radius");
  check_range(contrast_min, contrast_max, "contrast");
  check_range(brightness_min, brightness_max, "brightness");
  check_range(scale_min, scale_max, "scale");
  if (occlusion_lines < 0 || occlusion_circles < 0) {
    throw Error(ErrorCode::kInvalidArgument, "augment config: occlusion counts must be non-negative");
  }
  if (line_width_min < 0 || circle_radius_min < 0 || scale_min <= 0 || max_rotation_deg < 0 ||
      max_translation_frac < 0) {
    throw Error(ErrorCode::kInvalidArgument, "augment config: negative magnitude");
  }
}

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const double r = r8 / 255.0;
  const double g = g8 / 255.0;
  const double b = b8 / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double chroma = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? chroma / mx : 0.0;
  if (chroma > 0.0) {
    double h;
    if (mx == r) {
      h = std::fmod((g - b) / chroma, 6.0);
    } else if (mx == g) {
      h = (b - r) / chroma + 2.0;
    } else {
      h = (r - g) / chroma + 4.0;
    }
    h *= 60.0;
    if (h < 0.0) h += 360.0;
    out.h = h;
  }
  return out;
}

MaskRaster chroma_key_mask(const ImageRaster& image, const GreenRange& range) {
  MaskRaster mask(image.width(), image.height(), MaskRole::kGeneric);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const std::uint8_t* p = image.pixel(x, y);
      const Hsv hsv = rgb_to_hsv(p[0], p[1], p[2]);
      mask.set(x, y, hsv.h >= range.h_lo && hsv.h <= range.h_hi && hsv.s >= range.s_min && hsv.v >= range.v_min);
    }
  }
  return mask;
}

ImageRaster composite_background(const ImageRaster& image, const MaskRaster& key, const ImageRaster& background) {
  if (key.width() != image.width() || key.height() != image.height() || background.width() != image.width() ||
      background.height() != image.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "image, key and background must share dimensions");
  }
  ImageRaster out = image;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (key.at(x, y)) std::copy_n(background.pixel(x, y), 3, out.pixel(x, y));
    }
  }
  return out;
}

ImageRaster draw_occlusions(const ImageRaster& image, const std::vector<Vec2>& joints, const AugmentConfig& config,
                            CounterRng& rng, OcclusionReport* report) {
  ImageRaster out = image;
  std::vector<int> inside;
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const Vec2& j = joints[i];
    if (j.allFinite() && j.x() >= 0 && j.y() >= 0 && j.x() < image.width() && j.y() < image.height()) {
      inside.push_back(static_cast<int>(i));
    }
  }
  if (inside.empty()) return out;

  auto paint = [&](double x0, double y0, double x1, double y1, auto&& covered, const std::array<std::uint8_t, 3>& c) {
    const int xa = std::max(0, static_cast<int>(std::floor(x0)));
    const int ya = std::max(0, static_cast<int>(std::floor(y0)));
    const int xb = std::min(out.width() - 1, static_cast<int>(std::ceil(x1)));
    const int yb = std::min(out.height() - 1, static_cast<int>(std::ceil(y1)));
    for (int y = ya; y <= yb; ++y) {
      for (int x = xa; x <= xb; ++x) {
        if (covered(Vec2(x, y))) out.set(x, y, c[0], c[1], c[2]);
      }
    }
  };

  if (inside.size() >= 2) {
    for (int i = 0; i < config.occlusion_lines; ++i) {
      OcclusionLine line;
      // Uniform over unordered distinct pairs.
      const std::uint64_t n = inside.size();
      const std::uint64_t a = rng.below(n);
      std::uint64_t b = rng.below(n - 1);
      if (b >= a) ++b;
      line.joint_a = inside[a];
      line.joint_b = inside[b];
      line.width = rng.uniform(config.line_width_min, config.line_width_max);
      line.color = random_color(rng);
      const Vec2 pa = joints[line.joint_a];
      const Vec2 pb = joints[line.joint_b];
      const double half = line.width / 2.0;
      paint(std::min(pa.x(), pb.x()) - half, std::min(pa.y(), pb.y()) - half, std::max(pa.x(), pb.x()) + half,
            std::max(pa.y(), pb.y()) + half,
            [&](const Vec2& p) { return segment_distance(p, pa, pb) <= half; }, line.color);
      if (report) report->lines.push_back(line);
    }
  }

  Vec2 lo = joints[inside.front()];
  Vec2 hi = lo;
  for (int idx : inside) {
    lo = lo.cwiseMin(joints[idx]);
    hi = hi.cwiseMax(joints[idx]);
  }
  for (int i = 0; i < config.occlusion_circles; ++i) {
    OcclusionCircle circle;
    circle.center = {rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y())};
    circle.radius = rng.uniform(config.circle_radius_min, config.circle_radius_max);
    circle.color = random_color(rng);
    const Vec2 c = circle.center;
    const double r = circle.radius;
    paint(c.x() - r, c.y() - r, c.x() + r, c.y() + r, [&](const Vec2& p) { return (p - c).norm() <= r; },
          circle.color);
    if (report) report->circles.push_back(circle);
  }
  return out;
}

PhotometricParams sample_photometric(int width, int height, const AugmentConfig& config, CounterRng& rng) {
  PhotometricParams p;
  p.contrast = rng.uniform(config.contrast_min, config.contrast_max);
  p.brightness = rng.uniform(config.brightness_min, config.brightness_max);
  const double angle = rng.uniform(-config.max_rotation_deg, config.max_rotation_deg) * std::numbers::pi / 180.0;
  const double scale = rng.uniform(config.scale_min, config.scale_max);
  const double tx = rng.uniform(-config.max_translation_frac, config.max_translation_frac) * width;
  const double ty = rng.uniform(-config.max_translation_frac, config.max_translation_frac) * height;
  Eigen::Matrix2d lin;
  lin << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  lin *= scale;
  const Vec2 center((width - 1) / 2.0, (height - 1) / 2.0);
  p.warp.leftCols<2>() = lin;
  p.warp.col(2) = center + Vec2(tx, ty) - lin * center;
  return p;
}

Vec2 apply_affine(const Affine2D& affine, const Vec2& p) { return affine.leftCols<2>() * p + affine.col(2); }

ImageRaster apply_photometric_warp(const ImageRaster& image, const PhotometricParams& params) {
  ImageRaster adjusted = image;
  for (auto& b : adjusted.data()) {
    b = static_cast<std::uint8_t>(std::lround(std::clamp(params.contrast * b + params.brightness, 0.0, 255.0)));
  }
  const Eigen::Matrix2d lin = params.warp.leftCols<2>();
  if (std::abs(lin.determinant()) < 1e-12) throw Error(ErrorCode::kInvalidArgument, "warp is singular");
  const Eigen::Matrix2d inv = lin.inverse();
  const Vec2 offset = params.warp.col(2);

  ImageRaster out(image.width(), image.height());
  const int w = image.width();
  const int h = image.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Vec2 src = inv * (Vec2(x, y) - offset);
      const double fx = std::clamp(src.x(), 0.0, w - 1.0);
      const double fy = std::clamp(src.y(), 0.0, h - 1.0);
      const int x0 = static_cast<int>(fx);
      const int y0 = static_cast<int>(fy);
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double wx = fx - x0;
      const double wy = fy - y0;
      for (int c = 0; c < 3; ++c) {
        const double top = (1 - wx) * adjusted.pixel(x0, y0)[c] + wx * adjusted.pixel(x1, y0)[c];
        const double bottom = (1 - wx) * adjusted.pixel(x0, y1)[c] + wx * adjusted.pixel(x1, y1)[c];
        out.pixel(x, y)[c] = static_cast<std::uint8_t>(std::lround(std::clamp((1 - wy) * top + wy * bottom, 0.0, 255.0)));
      }
    }
  }
  return out;
}

WarpResult photometric_warp(const ImageRaster& image, const AugmentConfig& config, CounterRng& rng) {
  const PhotometricParams params = sample_photometric(image.width(), image.height(), config, rng);
  return {apply_photometric_warp(image, params), params.warp};
}

AugmentResult augment_frame(const ImageRaster& image, const std::vector<Vec2>& joints,
                            const std::vector<ImageRaster>& backgrounds, const AugmentConfig& config,
                            std::uint64_t frame_index) {
  config.validate();
  ImageRaster current = image;
  if (!backgrounds.empty()) {
    CounterRng rng(config.seed, frame_index, kOpBackground);
    const ImageRaster& bg = backgrounds[rng.below(backgrounds.size())];
    const ImageRaster fitted = (bg.width() == image.width() && bg.height() == image.height())
                                   ? bg
                                   : resize_bilinear(bg, image.width(), image.height());
    current = composite_background(current, chroma_key_mask(current, config.green), fitted);
  }
  CounterRng occlusion_rng(config.seed, frame_index, kOpOcclusion);
  current = draw_occlusions(current, joints, config, occlusion_rng);
  CounterRng photometric_rng(config.seed, frame_index, kOpPhotometric);
  WarpResult warped = photometric_warp(current, config, photometric_rng);

  AugmentResult result{std::move(warped.image), {}, warped.affine};
  result.joints.reserve(joints.size());
  for (const auto& j : joints) result.joints.push_back(apply_affine(result.affine, j));
  return result;
}

}  // namespace egohoi
