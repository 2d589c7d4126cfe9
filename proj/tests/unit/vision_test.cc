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
#include <vector>

#include <gtest/gtest.h>

#include "generators.h"
#include "tinylift/vision/frontend.h"

namespace tinylift::vision {
namespace {

GrayImage filled(int w, int h, uint8_t v) {
  return {w, h, std::vector<uint8_t>(static_cast<std::size_t>(w) * h, v)};
}

TEST(Grayscale, PrimaryColours) {
  const std::vector<uint8_t> rgb = {255, 255, 255, 0, 0, 0, 255, 0, 0, 0, 255, 0, 0, 0, 255};
  const auto g = to_grayscale(5, 1, rgb);
  EXPECT_EQ(g.pixels, (std::vector<uint8_t>{255, 0, 76, 150, 29}));
}

TEST(Grayscale, BadDimensions) {
  std::vector<uint8_t> rgb(10);
  try {
    to_grayscale(2, 2, rgb);
    FAIL();
  } catch (const VisionError& e) {
    EXPECT_EQ(e.code(), VisionErrc::kBadDimensions);
  }
  EXPECT_THROW(to_grayscale(0, 1, std::vector<uint8_t>{}), VisionError);
}

TEST(Grayscale, ExhaustiveChannelRangeStaysInBytes) {
  testing::Rng rng(1);
  std::vector<uint8_t> rgb(3 * 1000);
  for (auto& v : rgb) v = static_cast<uint8_t>(rng.range(0, 255));
  const auto g = to_grayscale(1000, 1, rgb);
  for (int i = 0; i < 1000; ++i) {
    const double y = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
    EXPECT_NEAR(g.pixels[i], y, 0.5 + 1e-9);
  }
}

TEST(ResizeNearest, IdentityAtTargetSize) {
  testing::Rng rng(2);
  GrayImage img = filled(96, 96, 0);
  for (auto& p : img.pixels) p = static_cast<uint8_t>(rng.range(0, 255));
  EXPECT_EQ(resize_nearest(img).pixels, img.pixels);
  EXPECT_EQ(resize_nearest(resize_nearest(img)).pixels, img.pixels);
}

TEST(ResizeNearest, ConstantImage) {
  const auto out = resize_nearest(filled(192, 192, 7));
  EXPECT_EQ(out.width, 96);
  EXPECT_EQ(out.height, 96);
  for (uint8_t p : out.pixels) EXPECT_EQ(p, 7);
}

TEST(ResizeNearest, CheckerboardMatchesIndexMap) {
  GrayImage img = filled(192, 192, 0);
  for (int y = 0; y < 192; ++y) {
    for (int x = 0; x < 192; ++x) img.pixels[y * 192 + x] = ((x / 2 + y / 2) % 2) ? 255 : 0;
  }
  const auto out = resize_nearest(img);
  for (int y = 0; y < 96; ++y) {
    for (int x = 0; x < 96; ++x) EXPECT_EQ(out.at(x, y), img.at(x * 192 / 96, y * 192 / 96));
  }
}

TEST(ResizeNearest, ArbitrarySizes) {
  testing::Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const int w = static_cast<int>(rng.range(1, 300)), h = static_cast<int>(rng.range(1, 300));
    GrayImage img = filled(w, h, 0);
    for (auto& p : img.pixels) p = static_cast<uint8_t>(rng.range(0, 255));
    const auto out = resize_nearest(img);
    for (int y = 0; y < 96; y += 7) {
      for (int x = 0; x < 96; x += 5) EXPECT_EQ(out.at(x, y), img.at(x * w / 96, y * h / 96));
    }
  }
}

TEST(ResizeBilinear, ConstantAndIdentity) {
  for (uint8_t p : resize_bilinear(filled(200, 150, 91)).pixels) EXPECT_EQ(p, 91);
  testing::Rng rng(3);
  GrayImage img = filled(96, 96, 0);
  for (auto& p : img.pixels) p = static_cast<uint8_t>(rng.range(0, 255));
  EXPECT_EQ(resize_bilinear(img).pixels, img.pixels);
}

TEST(QuantizeImage, ShiftByMinus128) {
  GrayImage img = filled(96, 96, 0);
  img.pixels[1] = 255;
  img.pixels[2] = 128;
  const auto q = quantize_image(img);
  EXPECT_EQ(q.shape, (nn::Shape{1, 96, 96, 1}));
  EXPECT_EQ(q.data[0], -128);
  EXPECT_EQ(q.data[1], 127);
  EXPECT_EQ(q.data[2], 0);
  EXPECT_EQ(q.params, image_input_params());
}

TEST(QuantizeImage, BijectionOnAllValues) {
  GrayImage img = filled(96, 96, 0);
  for (int i = 0; i < 256; ++i) img.pixels[i] = static_cast<uint8_t>(i);
  const auto q = quantize_image(img);
  for (int i = 0; i < 256; ++i) EXPECT_EQ(q.data[i], i - 128);
}

TEST(QuantizeImage, WrongSize) {
  try {
    quantize_image(filled(95, 96, 0));
    FAIL();
  } catch (const VisionError& e) {
    EXPECT_EQ(e.code(), VisionErrc::kWrongSize);
  }
}

TEST(Pgm, RoundTrip) {
  testing::Rng rng(4);
  GrayImage img = filled(13, 7, 0);
  for (auto& p : img.pixels) p = static_cast<uint8_t>(rng.range(0, 255));
  const auto back = read_pgm(write_pgm(img));
  EXPECT_EQ(back.width, 13);
  EXPECT_EQ(back.height, 7);
  EXPECT_EQ(back.pixels, img.pixels);
}

TEST(Pgm, HandWrittenWithComment) {
  const std::string text = "P5\n# made by hand\n2 2\n255\n";
  std::vector<uint8_t> bytes(text.begin(), text.end());
  for (uint8_t p : {1, 2, 3, 250}) bytes.push_back(p);
  const auto img = read_pgm(bytes);
  EXPECT_EQ(img.pixels, (std::vector<uint8_t>{1, 2, 3, 250}));
}

TEST(Pgm, Rejects) {
  auto bad = [](const std::string& s) {
    std::vector<uint8_t> b(s.begin(), s.end());
    try {
      read_pgm(b);
      return false;
    } catch (const VisionError& e) {
      return e.code() == VisionErrc::kBadPgm;
    }
  };
  EXPECT_TRUE(bad("P2\n1 1\n255\n0"));
  EXPECT_TRUE(bad("P5\n2 2\n255\n\x01"));
  EXPECT_TRUE(bad("P5\n1 1\n65535\n\x01\x01"));
  EXPECT_TRUE(bad(""));
}

}  // namespace
}  // namespace tinylift::vision
