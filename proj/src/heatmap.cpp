// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/heatmap.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "egohoi/error.hpp"

namespace egohoi {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) throw Error(ErrorCode::kSchemaError, "truncated HMAP stream");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

HeatmapStack::HeatmapStack(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0 || channels < 0) {
    throw Error(ErrorCode::kInvalidArgument, "heatmap dimensions must be positive");
  }
  values_.assign(plane_size() * static_cast<std::size_t>(channels), 0.0f);
}

void splat_gaussian(HeatmapStack& stack, int channel, const Vec2& center, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be positive");
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (int y = 0; y < stack.height(); ++y) {
    const double dy = y - center.y();
    for (int x = 0; x < stack.width(); ++x) {
      const double dx = x - center.x();
      const float g = static_cast<float>(std::exp(-(dx * dx + dy * dy) * inv));
      float& cell = stack.at(channel, y, x);
      cell = std::max(cell, g);
    }
  }
}

HeatmapStack encode_gaussian(const std::vector<Vec2>& keypoints, int width, int height, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be positive");
  HeatmapStack stack(width, height, static_cast<int>(keypoints.size()));
  for (std::size_t c = 0; c < keypoints.size(); ++c) splat_gaussian(stack, static_cast<int>(c), keypoints[c], sigma);
  return stack;
}

Peak decode_peak(const HeatmapStack& stack, int channel) {
  if (channel < 0 || channel >= stack.channels()) throw Error(ErrorCode::kInvalidArgument, "channel out of range");
  const auto plane = stack.channel(channel);
  std::size_t best = 0;
  for (std::size_t i = 1; i < plane.size(); ++i) {
    if (plane[i] > plane[best]) best = i;
  }
  if (!(plane[best] > 0.0f)) {
    throw Error(ErrorCode::kEmptyHeatmap, "channel " + std::to_string(channel) + " has no positive value");
  }
  return {static_cast<int>(best % stack.width()), static_cast<int>(best / stack.width()),
          std::clamp(static_cast<double>(plane[best]), 0.0, 1.0)};
}

Vec2 frame_to_grid(const Vec2& frame_px, int frame_width, int frame_height, int grid_width, int grid_height) {
  return {(frame_px.x() + 0.5) * grid_width / frame_width - 0.5,
          (frame_px.y() + 0.5) * grid_height / frame_height - 0.5};
}

Vec2 grid_to_frame(const Vec2& grid_px, int frame_width, int frame_height, int grid_width, int grid_height) {
  return {(grid_px.x() + 0.5) * frame_width / grid_width - 0.5,
          (grid_px.y() + 0.5) * frame_height / grid_height - 0.5};
}

HeatmapStack localization_target(const std::vector<HandBox>& hands, int frame_width, int frame_height) {
  if (frame_width <= 0 || frame_height <= 0) throw Error(ErrorCode::kInvalidArgument, "frame size must be positive");
  HeatmapStack stack(kLocatorWidth, kLocatorHeight, 2);
  for (const auto& hand : hands) {
    const Vec2 g = frame_to_grid(hand.box.center(), frame_width, frame_height);
    splat_gaussian(stack, static_cast<int>(hand.side), g, kLocatorSigma);
  }
  return stack;
}

RoiBox roi_crop(int frame_width, int frame_height, const Vec2& center, int side) {
  if (side <= 0) throw Error(ErrorCode::kInvalidArgument, "crop side must be positive");
  if (side > std::min(frame_width, frame_height)) {
    throw Error(ErrorCode::kSideExceedsFrame, "crop side " + std::to_string(side) + " exceeds frame " +
                                                  std::to_string(frame_width) + "x" + std::to_string(frame_height));
  }
  const int x0 = static_cast<int>(std::lround(center.x() - side / 2.0));
  const int y0 = static_cast<int>(std::lround(center.y() - side / 2.0));
  RoiBox box;
  box.side = side;
  box.x0 = std::clamp(x0, 0, frame_width - side);
  box.y0 = std::clamp(y0, 0, frame_height - side);
  box.clamped = box.x0 != x0 || box.y0 != y0;
  box.center = {box.x0 + side / 2.0, box.y0 + side / 2.0};
  return box;
}

void write_hmap(std::ostream& out, const HeatmapStack& stack) {
  out.write("HMAP", 4);
  put_u32(out, static_cast<std::uint32_t>(stack.width()));
  put_u32(out, static_cast<std::uint32_t>(stack.height()));
  put_u32(out, static_cast<std::uint32_t>(stack.channels()));
  for (float f : stack.values()) put_u32(out, std::bit_cast<std::uint32_t>(f));
  if (!out) throw Error(ErrorCode::kIoError, "failed writing HMAP data");
}

HeatmapStack read_hmap(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "HMAP", 4) != 0) throw Error(ErrorCode::kSchemaError, "missing HMAP magic");
  const std::uint32_t w = get_u32(in);
  const std::uint32_t h = get_u32(in);
  const std::uint32_t c = get_u32(in);
  if (w == 0 || h == 0 || w > (1u << 16) || h > (1u << 16) || c > (1u << 12)) {
    throw Error(ErrorCode::kSchemaError, "implausible HMAP dimensions");
  }
  HeatmapStack stack(static_cast<int>(w), static_cast<int>(h), static_cast<int>(c));
  for (float& f : stack.values()) {
    f = std::bit_cast<float>(get_u32(in));
    if (!std::isfinite(f) || f < 0.0f) throw Error(ErrorCode::kSchemaError, "HMAP values must be finite and non-negative");
  }
  return stack;
}

void write_hmap(const std::filesystem::path& path, const HeatmapStack& stack) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  write_hmap(out, stack);
}

HeatmapStack read_hmap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    return read_hmap(in);
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

}  // namespace egohoi
