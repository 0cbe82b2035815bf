// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace egohoi {

/// 8-bit RGB, row-major, interleaved.
class ImageRaster {
 public:
  ImageRaster() = default;
  ImageRaster(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint8_t* pixel(int x, int y) { return &data_[3 * (static_cast<std::size_t>(y) * width_ + x)]; }
  const std::uint8_t* pixel(int x, int y) const { return &data_[3 * (static_cast<std::size_t>(y) * width_ + x)]; }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    std::uint8_t* p = pixel(x, y);
    p[0] = r;
    p[1] = g;
    p[2] = b;
  }
  void fill(std::uint8_t r, std::uint8_t g, std::uint8_t b);

  std::vector<std::uint8_t>& data() { return data_; }
  const std::vector<std::uint8_t>& data() const { return data_; }

  bool operator==(const ImageRaster&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

enum class MaskRole { kGeneric, kHand, kObject };

/// Binary mask, values in {0,1}, row-major.
class MaskRaster {
 public:
  MaskRaster() = default;
  MaskRaster(int width, int height, MaskRole role = MaskRole::kGeneric);

  int width() const { return width_; }
  int height() const { return height_; }
  MaskRole role() const { return role_; }
  void set_role(MaskRole role) { role_ = role; }

  std::uint8_t at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  void set(int x, int y, bool on) { data_[static_cast<std::size_t>(y) * width_ + x] = on ? 1 : 0; }
  std::size_t count() const;

  std::vector<std::uint8_t>& data() { return data_; }
  const std::vector<std::uint8_t>& data() const { return data_; }

  /// Pixel equality; the role tag is ignored.
  bool operator==(const MaskRaster& other) const {
    return width_ == other.width_ && height_ == other.height_ && data_ == other.data_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  MaskRole role_ = MaskRole::kGeneric;
  std::vector<std::uint8_t> data_;
};

/// Binary PPM (P6, maxval 255).
void write_ppm(std::ostream& out, const ImageRaster& image);
ImageRaster read_ppm(std::istream& in);
void write_ppm(const std::filesystem::path& path, const ImageRaster& image);
ImageRaster read_ppm(const std::filesystem::path& path);

/// Binary PGM (P5, maxval 255). Written as 0/255; read as foreground >= 128.
void write_pgm(std::ostream& out, const MaskRaster& mask);
MaskRaster read_pgm(std::istream& in, MaskRole role = MaskRole::kGeneric);
void write_pgm(const std::filesystem::path& path, const MaskRaster& mask);
MaskRaster read_pgm(const std::filesystem::path& path, MaskRole role = MaskRole::kGeneric);

/// Bilinear resize, pixel-center aligned, edge clamped.
ImageRaster resize_bilinear(const ImageRaster& image, int width, int height);
/// Nearest-neighbour resize (pixel-center aligned).
MaskRaster resize_nearest(const MaskRaster& mask, int width, int height);

}  // namespace egohoi
