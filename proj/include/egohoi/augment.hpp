// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "egohoi/camera.hpp"
#include "egohoi/raster.hpp"
#include "egohoi/rng.hpp"

namespace egohoi {

struct GreenRange {
  double h_lo = 90.0;   // degrees
  double h_hi = 150.0;  // degrees
  double s_min = 0.35;
  double v_min = 0.2;
};

struct AugmentConfig {
  GreenRange green;
  int occlusion_lines = 2;
  int occlusion_circles = 2;
  double line_width_min = 2.0;
  double line_width_max = 6.0;
  double circle_radius_min = 4.0;
  double circle_radius_max = 16.0;
  double contrast_min = 0.8;
  double contrast_max = 1.2;
  double brightness_min = -25.0;
  double brightness_max = 25.0;
  double max_rotation_deg = 15.0;
  double scale_min = 0.9;
  double scale_max = 1.1;
  double max_translation_frac = 0.05;
  std::uint64_t seed = 0;

  /// Throws kInvalidArgument on empty or unordered ranges.
  void validate() const;
};

struct Hsv {
  double h = 0.0;  // degrees in [0, 360)
  double s = 0.0;
  double v = 0.0;
};

/// Hexcone transform of RGB scaled to [0,1].
Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// 1 where hue is in [h_lo, h_hi], saturation >= s_min and value >= v_min.
MaskRaster chroma_key_mask(const ImageRaster& image, const GreenRange& range);

/// Keyed pixels take the background's value; others are copied unchanged.
/// Throws kDimensionMismatch unless all three rasters agree in size.
ImageRaster composite_background(const ImageRaster& image, const MaskRaster& key, const ImageRaster& background);

struct OcclusionLine {
  int joint_a = 0;
  int joint_b = 0;
  double width = 0.0;
  std::array<std::uint8_t, 3> color{};
};

struct OcclusionCircle {
  Vec2 center;
  double radius = 0.0;
  std::array<std::uint8_t, 3> color{};
};

struct OcclusionReport {
  std::vector<OcclusionLine> lines;
  std::vector<OcclusionCircle> circles;
};

/// Paints `occlusion_lines` segments between uniformly chosen distinct joint
/// pairs and `occlusion_circles` filled circles centered uniformly over the
/// joints' bounding box. Joints outside the frame are ignored.
ImageRaster draw_occlusions(const ImageRaster& image, const std::vector<Vec2>& joints, const AugmentConfig& config,
                            CounterRng& rng, OcclusionReport* report = nullptr);

/// Row-major 2x3 map from input pixel coordinates to output pixel coordinates.
using Affine2D = Eigen::Matrix<double, 2, 3>;

struct PhotometricParams {
  double contrast = 1.0;
  double brightness = 0.0;
  Affine2D warp = Affine2D::Identity();
};

PhotometricParams sample_photometric(int width, int height, const AugmentConfig& config, CounterRng& rng);

/// out = clamp(contrast * in + brightness), then warped by `warp` with
/// bilinear sampling and edge-clamp padding.
ImageRaster apply_photometric_warp(const ImageRaster& image, const PhotometricParams& params);

struct WarpResult {
  ImageRaster image;
  Affine2D affine;
};

WarpResult photometric_warp(const ImageRaster& image, const AugmentConfig& config, CounterRng& rng);

Vec2 apply_affine(const Affine2D& affine, const Vec2& p);

struct AugmentResult {
  ImageRaster image;
  std::vector<Vec2> joints;
  Affine2D affine;
};

/// Chroma key + background replacement (if a background is given), occlusions,
/// then photometric/warp jitter. Randomness is keyed by (seed, frame_index).
AugmentResult augment_frame(const ImageRaster& image, const std::vector<Vec2>& joints,
                            const std::vector<ImageRaster>& backgrounds, const AugmentConfig& config,
                            std::uint64_t frame_index);

}  // namespace egohoi
