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
#ifndef TINYLIFT_VISION_FRONTEND_H_
#define TINYLIFT_VISION_FRONTEND_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tinylift/error.h"
#include "tinylift/nn/quant.h"

namespace tinylift::vision {

inline constexpr int kModelSide = 96;

enum class VisionErrc {
  kBadDimensions,
  kWrongSize,
  kBadPgm,
};
std::string to_string(VisionErrc code);
using VisionError = Error<VisionErrc>;

enum class ResizeKind { kNearest, kBilinear };

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // row-major

  uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// BT.601 luma of interleaved RGB.
GrayImage to_grayscale(int width, int height, std::span<const uint8_t> rgb);

GrayImage resize_nearest(const GrayImage& image, int out_width = kModelSide,
                         int out_height = kModelSide);
GrayImage resize_bilinear(const GrayImage& image, int out_width = kModelSide,
                          int out_height = kModelSide);
GrayImage resize(const GrayImage& image, ResizeKind kind, int out_width = kModelSide,
                 int out_height = kModelSide);

// 96x96 image -> (1,96,96,1) int8 tensor, q = p - 128.
nn::QuantTensor quantize_image(const GrayImage& image);

nn::QuantParams image_input_params();

// Binary PGM ("P5", maxval 255). Comments after '#' are skipped.
GrayImage read_pgm(std::span<const uint8_t> bytes);
GrayImage read_pgm_file(const std::string& path);
std::vector<uint8_t> write_pgm(const GrayImage& image);

}  // namespace tinylift::vision

#endif  // TINYLIFT_VISION_FRONTEND_H_
