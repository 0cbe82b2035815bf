// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "egohoi/error.hpp"

namespace egohoi {

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

struct NetpbmHeader {
  int width = 0;
  int height = 0;
};

NetpbmHeader read_header(std::istream& in, const char* magic) {
  if (header_token(in) != magic) throw Error(ErrorCode::kSchemaError, std::string("expected netpbm magic ") + magic);
  NetpbmHeader h;
  try {
    h.width = std::stoi(header_token(in));
    h.height = std::stoi(header_token(in));
    if (std::stoi(header_token(in)) != 255) throw Error(ErrorCode::kSchemaError, "only maxval 255 is supported");
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kSchemaError, "malformed netpbm header");
  }
  if (h.width <= 0 || h.height <= 0) throw Error(ErrorCode::kSchemaError, "netpbm dimensions must be positive");
  return h;
}

template <typename T, typename Reader>
T read_file(const std::filesystem::path& path, Reader reader) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    return reader(in);
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  writer(out);
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

}  // namespace

ImageRaster::ImageRaster(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::kInvalidArgument, "image dimensions must be positive");
  data_.assign(3 * static_cast<std::size_t>(width) * height, 0);
}

void ImageRaster::fill(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = r;
    data_[i + 1] = g;
    data_[i + 2] = b;
  }
}

MaskRaster::MaskRaster(int width, int height, MaskRole role) : width_(width), height_(height), role_(role) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::kInvalidArgument, "mask dimensions must be positive");
  data_.assign(static_cast<std::size_t>(width) * height, 0);
}

std::size_t MaskRaster::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

void write_ppm(std::ostream& out, const ImageRaster& image) {
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data().data()), static_cast<std::streamsize>(image.data().size()));
}

ImageRaster read_ppm(std::istream& in) {
  const NetpbmHeader h = read_header(in, "P6");
  ImageRaster image(h.width, h.height);
  in.read(reinterpret_cast<char*>(image.data().data()), static_cast<std::streamsize>(image.data().size()));
  if (!in) throw Error(ErrorCode::kSchemaError, "truncated PPM data");
  return image;
}

void write_pgm(std::ostream& out, const MaskRaster& mask) {
  out << "P5\n" << mask.width() << ' ' << mask.height() << "\n255\n";
  std::vector<char> bytes(mask.data().size());
  std::transform(mask.data().begin(), mask.data().end(), bytes.begin(),
                 [](std::uint8_t v) { return static_cast<char>(v ? 255 : 0); });
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

MaskRaster read_pgm(std::istream& in, MaskRole role) {
  const NetpbmHeader h = read_header(in, "P5");
  MaskRaster mask(h.width, h.height, role);
  std::vector<unsigned char> bytes(mask.data().size());
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!in) throw Error(ErrorCode::kSchemaError, "truncated PGM data");
  std::transform(bytes.begin(), bytes.end(), mask.data().begin(),
                 [](unsigned char v) { return static_cast<std::uint8_t>(v >= 128 ? 1 : 0); });
  return mask;
}

void write_ppm(const std::filesystem::path& path, const ImageRaster& image) {
  write_file(path, [&](std::ostream& out) { write_ppm(out, image); });
}

ImageRaster read_ppm(const std::filesystem::path& path) {
  return read_file<ImageRaster>(path, [](std::istream& in) { return read_ppm(in); });
}

void write_pgm(const std::filesystem::path& path, const MaskRaster& mask) {
  write_file(path, [&](std::ostream& out) { write_pgm(out, mask); });
}

MaskRaster read_pgm(const std::filesystem::path& path, MaskRole role) {
  return read_file<MaskRaster>(path, [role](std::istream& in) { return read_pgm(in, role); });
}

ImageRaster resize_bilinear(const ImageRaster& image, int width, int height) {
  ImageRaster out(width, height);
  const double sx = static_cast<double>(image.width()) / width;
  const double sy = static_cast<double>(image.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, image.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, image.height() - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, image.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, image.width() - 1);
      const double wx = fx - x0;
      for (int c = 0; c < 3; ++c) {
        const double top = (1 - wx) * image.pixel(x0, y0)[c] + wx * image.pixel(x1, y0)[c];
        const double bottom = (1 - wx) * image.pixel(x0, y1)[c] + wx * image.pixel(x1, y1)[c];
        out.pixel(x, y)[c] = static_cast<std::uint8_t>(std::lround(std::clamp((1 - wy) * top + wy * bottom, 0.0, 255.0)));
      }
    }
  }
  return out;
}

MaskRaster resize_nearest(const MaskRaster& mask, int width, int height) {
  MaskRaster out(width, height, mask.role());
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(static_cast<int>((y + 0.5) * mask.height() / height), mask.height() - 1);
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(static_cast<int>((x + 0.5) * mask.width() / width), mask.width() - 1);
      out.set(x, y, mask.at(sx, sy) != 0);
    }
  }
  return out;
}

}  // namespace egohoi
