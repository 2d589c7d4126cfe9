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
#ifndef TINYLIFT_TESTS_SUPPORT_GENERATORS_H_
#define TINYLIFT_TESTS_SUPPORT_GENERATORS_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tinylift/nn/builder.h"
#include "tinylift/nn/model.h"
#include "tinylift/nn/quant.h"

namespace tinylift::testing {

// splitmix64; small, seedable and identical on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  // Inclusive range.
  int64_t range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(next() % static_cast<uint64_t>(hi - lo + 1));
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  bool coin() { return next() & 1; }
  int8_t int8() { return static_cast<int8_t>(range(-128, 127)); }

 private:
  uint64_t state_;
};

inline std::vector<int8_t> random_int8(Rng& rng, std::size_t n) {
  std::vector<int8_t> v(n);
  for (auto& x : v) x = rng.int8();
  return v;
}

inline nn::Activation random_activation(Rng& rng) {
  return static_cast<nn::Activation>(rng.range(0, 2));
}

inline nn::QuantParams random_params(Rng& rng) {
  return {static_cast<float>(rng.uniform(0.005, 0.2)), static_cast<int8_t>(rng.range(-40, 40))};
}

// A weighted layer with arbitrary int8 weights and parameters. Only the
// integer contract matters here, so the multiplier is drawn independently.
inline nn::LayerDesc random_weighted_layer(Rng& rng, nn::LayerKind kind, const nn::TensorInfo& in,
                                           int out_channels, int kh, int kw) {
  nn::LayerDesc layer;
  layer.kind = kind;
  layer.activation = random_activation(rng);
  layer.output_params = random_params(rng);
  layer.multiplier = nn::quantize_multiplier(std::exp(rng.uniform(std::log(1e-4), std::log(0.9))));
  nn::WeightTensor w;
  const int c = in.shape.back();
  int bias_len = 0;
  if (kind == nn::LayerKind::kConv2D) {
    w.shape = {out_channels, kh, kw, c};
    bias_len = out_channels;
  } else if (kind == nn::LayerKind::kDepthwiseConv2D) {
    w.shape = {1, kh, kw, c};
    bias_len = c;
  } else {
    w.shape = {out_channels, static_cast<int32_t>(nn::element_count(in.shape))};
    bias_len = out_channels;
  }
  if (kind != nn::LayerKind::kFullyConnected) {
    layer.stride_h = static_cast<uint8_t>(rng.range(1, 2));
    layer.stride_w = static_cast<uint8_t>(rng.range(1, 2));
    layer.padding = rng.coin() ? nn::Padding::kSame : nn::Padding::kValid;
  }
  w.params = {static_cast<float>(rng.uniform(0.001, 0.05)), static_cast<int8_t>(rng.coin() ? 0 : rng.range(-10, 10))};
  w.data = random_int8(rng, nn::element_count(w.shape));
  layer.weights = std::move(w);
  if (rng.range(0, 3) != 0) {
    layer.bias.resize(bias_len);
    for (auto& b : layer.bias) b = static_cast<int32_t>(rng.range(-20000, 20000));
  }
  return layer;
}

struct FloatCase {
  nn::ModelGraph graph;
  std::vector<double> input;
};

inline std::vector<double> random_reals(Rng& rng, std::size_t n, double scale) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

// Random graph of at most four layers with dims <= 16, built from real
// weights and calibrated on its own input:
//   [Conv2D | DepthwiseConv2D] -> Reshape -> FullyConnected -> Softmax
// or FullyConnected -> Softmax on a flat input.
inline FloatCase random_float_graph(Rng& rng, int index) {
  const bool spatial = index % 4 != 3;
  const double in_range = 1.0;
  if (!spatial) {
    const int n = static_cast<int>(rng.range(2, 16));
    const int out = static_cast<int>(rng.range(2, 6));
    auto input = random_reals(rng, n, in_range);
    nn::TensorInfo info{{1, n}, nn::choose_params(-in_range, in_range)};
    nn::GraphBuilder b("random_fc", info, input);
    const double bound = 2.0 / std::sqrt(n);
    b.fully_connected({out, n}, random_reals(rng, out * n, bound), random_reals(rng, out, 0.5),
                      nn::Activation::kNone);
    b.softmax();
    return {b.build(), input};
  }
  const int h = static_cast<int>(rng.range(3, 8));
  const int w = static_cast<int>(rng.range(3, 8));
  const int c = static_cast<int>(rng.range(1, 4));
  auto input = random_reals(rng, static_cast<std::size_t>(h * w * c), in_range);
  nn::TensorInfo info{{1, h, w, c}, nn::choose_params(-in_range, in_range)};
  nn::GraphBuilder b("random_conv", info, input);
  const int kh = static_cast<int>(rng.range(1, std::min(3, h)));
  const int kw = static_cast<int>(rng.range(1, std::min(3, w)));
  const int stride = static_cast<int>(rng.range(1, 2));
  const auto padding = rng.coin() ? nn::Padding::kSame : nn::Padding::kValid;
  const auto act = random_activation(rng);
  if (index % 2 == 0) {
    const int oc = static_cast<int>(rng.range(1, 6));
    const double bound = 1.5 / std::sqrt(kh * kw * c);
    b.conv2d({oc, kh, kw, c}, random_reals(rng, static_cast<std::size_t>(oc * kh * kw * c), bound),
             random_reals(rng, oc, 0.2), stride, stride, padding, act);
  } else {
    const double bound = 1.5 / std::sqrt(kh * kw);
    b.depthwise_conv2d({1, kh, kw, c}, random_reals(rng, static_cast<std::size_t>(kh * kw * c), bound),
                       random_reals(rng, c, 0.2), stride, stride, padding, act);
  }
  b.reshape();
  const int n = static_cast<int>(nn::element_count(b.current().shape));
  const int out = static_cast<int>(rng.range(2, 6));
  const double bound = 2.0 / std::sqrt(n);
  b.fully_connected({out, n}, random_reals(rng, static_cast<std::size_t>(out * n), bound),
                    random_reals(rng, out, 0.5), nn::Activation::kNone);
  b.softmax();
  return {b.build(), input};
}

}  // namespace tinylift::testing

#endif  // TINYLIFT_TESTS_SUPPORT_GENERATORS_H_
