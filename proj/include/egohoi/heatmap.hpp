// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "egohoi/camera.hpp"

namespace egohoi {

inline constexpr int kPoseHeatmapSize = 32;
inline constexpr int kLocatorWidth = 48;
inline constexpr int kLocatorHeight = 28;
inline constexpr double kLocatorSigma = 1.5;

/// Non-negative channel stack, channels stored consecutively, each row-major.
class HeatmapStack {
 public:
  HeatmapStack() = default;
  HeatmapStack(int width, int height, int channels);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t plane_size() const { return static_cast<std::size_t>(width_) * height_; }

  float& at(int c, int y, int x) { return values_[index(c, y, x)]; }
  float at(int c, int y, int x) const { return values_[index(c, y, x)]; }

  std::span<float> channel(int c) { return {values_.data() + c * plane_size(), plane_size()}; }
  std::span<const float> channel(int c) const { return {values_.data() + c * plane_size(), plane_size()}; }

  std::vector<float>& values() { return values_; }
  const std::vector<float>& values() const { return values_; }

  bool operator==(const HeatmapStack&) const = default;

 private:
  std::size_t index(int c, int y, int x) const {
    return static_cast<std::size_t>(c) * plane_size() + static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> values_;
};

/// One channel per keypoint: exp(-((x-u)^2 + (y-v)^2) / 2 sigma^2) on the
/// integer pixel grid. Off-grid keypoints give truncated Gaussians.
HeatmapStack encode_gaussian(const std::vector<Vec2>& keypoints, int width, int height, double sigma);

/// Adds (max-combines) a Gaussian into one channel.
void splat_gaussian(HeatmapStack& stack, int channel, const Vec2& center, double sigma);

struct Peak {
  int u = 0;
  int v = 0;
  double confidence = 0.0;
};

/// Argmax of one channel, ties resolved to the smallest row then column.
/// Throws kEmptyHeatmap for an all-zero channel.
Peak decode_peak(const HeatmapStack& stack, int channel);

enum class HandSide { kLeft = 0, kRight = 1 };

struct BoundingBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  Vec2 center() const { return {(x0 + x1) / 2.0, (y0 + y1) / 2.0}; }
};

struct HandBox {
  BoundingBox box;
  HandSide side = HandSide::kRight;
};

/// Frame pixel -> locator grid, pixel-center convention on both sides.
Vec2 frame_to_grid(const Vec2& frame_px, int frame_width, int frame_height,
                   int grid_width = kLocatorWidth, int grid_height = kLocatorHeight);
Vec2 grid_to_frame(const Vec2& grid_px, int frame_width, int frame_height,
                   int grid_width = kLocatorWidth, int grid_height = kLocatorHeight);

/// Two-channel (left, right) 48x28 target with a fixed-sigma Gaussian at each
/// box center, independent of box size. Same-side boxes combine by max.
HeatmapStack localization_target(const std::vector<HandBox>& hands, int frame_width, int frame_height);

struct RoiBox {
  Vec2 center;
  int x0 = 0;
  int y0 = 0;
  int side = 0;
  bool clamped = false;
};

/// Square crop of `side` pixels centered on `center`, shifted (never shrunk)
/// to lie inside the frame. Throws kSideExceedsFrame when it cannot fit.
RoiBox roi_crop(int frame_width, int frame_height, const Vec2& center, int side);

/// HMAP container: "HMAP", u32 LE width, height, channels, then f32 LE values.
void write_hmap(std::ostream& out, const HeatmapStack& stack);
HeatmapStack read_hmap(std::istream& in);
void write_hmap(const std::filesystem::path& path, const HeatmapStack& stack);
HeatmapStack read_hmap(const std::filesystem::path& path);

}  // namespace egohoi
