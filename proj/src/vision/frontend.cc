/* Copyright 2026 The TinyLift Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "tinylift/vision/frontend.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

namespace tinylift::vision {

std::string to_string(VisionErrc code) {
  switch (code) {
    case VisionErrc::kBadDimensions: return "BadDimensions";
    case VisionErrc::kWrongSize: return "WrongSize";
    case VisionErrc::kBadPgm: return "BadPgm";
  }
  return "VisionError";
}

namespace {

void check_image(const GrayImage& image) {
  if (image.width < 1 || image.height < 1 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw VisionError(VisionErrc::kBadDimensions,
                      std::to_string(image.width) + "x" + std::to_string(image.height));
  }
}

}  // namespace

GrayImage to_grayscale(int width, int height, std::span<const uint8_t> rgb) {
  if (width < 1 || height < 1 ||
      rgb.size() != 3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw VisionError(VisionErrc::kBadDimensions, "rgb buffer does not match " +
                                                      std::to_string(width) + "x" +
                                                      std::to_string(height));
  }
  GrayImage gray{width, height, {}};
  gray.pixels.resize(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
    const double luma = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
    gray.pixels[i] = static_cast<uint8_t>(std::clamp(std::round(luma), 0.0, 255.0));
  }
  return gray;
}

GrayImage resize_nearest(const GrayImage& image, int out_width, int out_height) {
  check_image(image);
  GrayImage out{out_width, out_height, {}};
  out.pixels.resize(static_cast<std::size_t>(out_width) * out_height);
  for (int y = 0; y < out_height; ++y) {
    const int sy = static_cast<int>(static_cast<int64_t>(y) * image.height / out_height);
    for (int x = 0; x < out_width; ++x) {
      const int sx = static_cast<int>(static_cast<int64_t>(x) * image.width / out_width);
      out.pixels[static_cast<std::size_t>(y) * out_width + x] = image.at(sx, sy);
    }
  }
  return out;
}

GrayImage resize_bilinear(const GrayImage& image, int out_width, int out_height) {
  check_image(image);
  GrayImage out{out_width, out_height, {}};
  out.pixels.resize(static_cast<std::size_t>(out_width) * out_height);
  const double x_ratio = static_cast<double>(image.width) / out_width;
  const double y_ratio = static_cast<double>(image.height) / out_height;
  for (int y = 0; y < out_height; ++y) {
    const double fy = std::clamp((y + 0.5) * y_ratio - 0.5, 0.0, image.height - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const double dy = fy - y0;
    for (int x = 0; x < out_width; ++x) {
      const double fx = std::clamp((x + 0.5) * x_ratio - 0.5, 0.0, image.width - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, image.width - 1);
      const double dx = fx - x0;
      const double top = image.at(x0, y0) * (1.0 - dx) + image.at(x1, y0) * dx;
      const double bottom = image.at(x0, y1) * (1.0 - dx) + image.at(x1, y1) * dx;
      const double v = top * (1.0 - dy) + bottom * dy;
      out.pixels[static_cast<std::size_t>(y) * out_width + x] =
          static_cast<uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
    }
  }
  return out;
}

GrayImage resize(const GrayImage& image, ResizeKind kind, int out_width, int out_height) {
  return kind == ResizeKind::kBilinear ? resize_bilinear(image, out_width, out_height)
                                       : resize_nearest(image, out_width, out_height);
}

nn::QuantParams image_input_params() { return {1.0f / 256.0f, -128}; }

nn::QuantTensor quantize_image(const GrayImage& image) {
  if (image.width != kModelSide || image.height != kModelSide ||
      image.pixels.size() != static_cast<std::size_t>(kModelSide) * kModelSide) {
    throw VisionError(VisionErrc::kWrongSize, "expected 96x96, got " +
                                                  std::to_string(image.width) + "x" +
                                                  std::to_string(image.height));
  }
  nn::QuantTensor t;
  t.shape = {1, kModelSide, kModelSide, 1};
  t.params = image_input_params();
  t.data.resize(image.pixels.size());
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    t.data[i] = static_cast<int8_t>(static_cast<int>(image.pixels[i]) - 128);
  }
  return t;
}

namespace {

class PgmHeaderReader {
 public:
  explicit PgmHeaderReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw VisionError(VisionErrc::kBadPgm, "expected integer in header");
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > 1 << 20) throw VisionError(VisionErrc::kBadPgm, "header value too large");
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw VisionError(VisionErrc::kBadPgm, "missing separator before raster");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

GrayImage read_pgm(std::span<const uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw VisionError(VisionErrc::kBadPgm, "not a binary P5 file");
  }
  PgmHeaderReader header(bytes);
  const int width = header.next_int();
  const int height = header.next_int();
  const int maxval = header.next_int();
  if (maxval != 255) {
    throw VisionError(VisionErrc::kBadPgm, "maxval must be 255, got " + std::to_string(maxval));
  }
  if (width < 1 || height < 1) throw VisionError(VisionErrc::kBadDimensions, "empty image");
  const std::size_t offset = header.raster_offset();
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() - offset < count) {
    throw VisionError(VisionErrc::kBadPgm, "raster truncated");
  }
  GrayImage image{width, height, {}};
  image.pixels.assign(bytes.begin() + offset, bytes.begin() + offset + count);
  return image;
}

GrayImage read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw VisionError(VisionErrc::kBadPgm, "cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_pgm(bytes);
}

std::vector<uint8_t> write_pgm(const GrayImage& image) {
  check_image(image);
  const std::string header = "P5\n" + std::to_string(image.width) + " " +
                             std::to_string(image.height) + "\n255\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

}  // namespace tinylift::vision
