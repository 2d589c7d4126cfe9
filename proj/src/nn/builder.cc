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
#include "tinylift/nn/builder.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "tinylift/nn/reference.h"

namespace tinylift::nn {

QuantParams choose_params(double lo, double hi) {
  lo = std::min(lo, 0.0);
  hi = std::max(hi, 0.0);
  if (hi - lo < 1e-9) hi = lo + 1e-3;
  const float scale = static_cast<float>((hi - lo) / 255.0);
  const double zp = std::round(-128.0 - lo / static_cast<double>(scale));
  return {scale, static_cast<int8_t>(std::clamp(zp, -128.0, 127.0))};
}

WeightTensor quantize_weights(const Shape& shape, std::span<const double> weights) {
  if (weights.size() != element_count(shape)) {
    throw std::invalid_argument("weight count does not match shape " + shape_to_string(shape));
  }
  double max_abs = 0.0;
  for (double w : weights) max_abs = std::max(max_abs, std::abs(w));
  WeightTensor t;
  t.shape = shape;
  t.params = {static_cast<float>(max_abs > 0.0 ? max_abs / 127.0 : 1.0 / 127.0), 0};
  t.data = quantize_values(weights, t.params);
  return t;
}

std::vector<int32_t> quantize_bias(std::span<const double> bias, double input_scale,
                                   double weight_scale) {
  std::vector<int32_t> out;
  out.reserve(bias.size());
  for (double b : bias) out.push_back(static_cast<int32_t>(std::llround(b / (input_scale * weight_scale))));
  return out;
}

GraphBuilder::GraphBuilder(std::string name, TensorInfo input, std::vector<double> calibration)
    : name_(std::move(name)), input_(input), current_(std::move(input)),
      calibration_(std::move(calibration)) {
  if (!calibration_.empty() && calibration_.size() != element_count(current_.shape)) {
    throw std::invalid_argument("calibration input does not match the input shape");
  }
}

void GraphBuilder::push(LayerDesc layer) {
  const TensorInfo out = infer_output(layer, current_);
  if (!calibration_.empty()) calibration_ = reference_layer(layer, current_, calibration_, out);
  layers_.push_back(std::move(layer));
  current_ = out;
}

GraphBuilder& GraphBuilder::weighted(LayerKind kind, const Shape& weight_shape,
                                     std::span<const double> weights, std::span<const double> bias,
                                     int stride_h, int stride_w, Padding padding,
                                     Activation activation, std::optional<QuantParams> output) {
  LayerDesc layer;
  layer.kind = kind;
  layer.stride_h = static_cast<uint8_t>(stride_h);
  layer.stride_w = static_cast<uint8_t>(stride_w);
  layer.padding = padding;
  layer.activation = activation;
  layer.weights = quantize_weights(weight_shape, weights);
  const double in_scale = current_.params.scale;
  const double w_scale = layer.weights->params.scale;
  layer.bias = quantize_bias(bias, in_scale, w_scale);

  if (!output) {
    if (calibration_.empty()) {
      throw std::invalid_argument("output params required without a calibration input");
    }
    layer.output_params = {1.0f, 0};
    layer.multiplier = {kMantissaMin, 0};
    const TensorInfo probe = infer_output(layer, current_);
    const std::vector<double> real = reference_layer(layer, current_, calibration_, probe);
    const auto [lo, hi] = std::minmax_element(real.begin(), real.end());
    output = choose_params(*lo, *hi);
  }
  // The multiplier must stay below one.
  const double min_scale = in_scale * w_scale * (1.0 + 1e-5);
  if (static_cast<double>(output->scale) <= min_scale) {
    output->scale = static_cast<float>(min_scale * 1.0001);
  }
  layer.output_params = *output;
  layer.multiplier = quantize_multiplier(in_scale * w_scale / static_cast<double>(output->scale));
  push(std::move(layer));
  return *this;
}

GraphBuilder& GraphBuilder::conv2d(const Shape& weight_shape, std::span<const double> weights,
                                   std::span<const double> bias, int stride_h, int stride_w,
                                   Padding padding, Activation activation,
                                   std::optional<QuantParams> output) {
  return weighted(LayerKind::kConv2D, weight_shape, weights, bias, stride_h, stride_w, padding,
                  activation, output);
}

GraphBuilder& GraphBuilder::depthwise_conv2d(const Shape& weight_shape,
                                             std::span<const double> weights,
                                             std::span<const double> bias, int stride_h,
                                             int stride_w, Padding padding, Activation activation,
                                             std::optional<QuantParams> output) {
  return weighted(LayerKind::kDepthwiseConv2D, weight_shape, weights, bias, stride_h, stride_w,
                  padding, activation, output);
}

GraphBuilder& GraphBuilder::fully_connected(const Shape& weight_shape,
                                            std::span<const double> weights,
                                            std::span<const double> bias, Activation activation,
                                            std::optional<QuantParams> output) {
  return weighted(LayerKind::kFullyConnected, weight_shape, weights, bias, 1, 1, Padding::kValid,
                  activation, output);
}

GraphBuilder& GraphBuilder::avg_pool2d(int stride_h, int stride_w) {
  LayerDesc layer;
  layer.kind = LayerKind::kAvgPool2D;
  layer.stride_h = static_cast<uint8_t>(stride_h);
  layer.stride_w = static_cast<uint8_t>(stride_w);
  layer.output_params = current_.params;
  push(std::move(layer));
  return *this;
}

GraphBuilder& GraphBuilder::reshape() {
  LayerDesc layer;
  layer.kind = LayerKind::kReshape;
  layer.output_params = current_.params;
  push(std::move(layer));
  return *this;
}

GraphBuilder& GraphBuilder::softmax() {
  LayerDesc layer;
  layer.kind = LayerKind::kSoftmax;
  layer.output_params = kSoftmaxOutputParams;
  push(std::move(layer));
  return *this;
}

ModelGraph GraphBuilder::build() const { return ModelGraph(name_, input_, layers_); }

namespace {

// Portable across standard libraries, unlike std::uniform_real_distribution.
class WeightSource {
 public:
  explicit WeightSource(uint64_t seed) : rng_(seed) {}

  double uniform(double limit) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return (2.0 * u - 1.0) * limit;
  }

  std::vector<double> he_uniform(std::size_t count, std::size_t fan_in) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    std::vector<double> w(count);
    for (double& v : w) v = uniform(limit);
    return w;
  }

  std::vector<double> small(std::size_t count) {
    std::vector<double> b(count);
    for (double& v : b) v = uniform(0.05);
    return b;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

ModelGraph make_person_reference_model(uint64_t seed) {
  WeightSource source(seed);
  const TensorInfo input{{1, 96, 96, 1}, {1.0f / 256.0f, -128}};
  std::vector<double> calibration(element_count(input.shape));
  for (double& v : calibration) v = 0.5 + source.uniform(0.5);
  GraphBuilder builder("person_detect_mobilenet_v1_025", input, std::move(calibration));

  int channels = 8;
  builder.conv2d({channels, 3, 3, 1}, source.he_uniform(9 * channels, 9), source.small(channels), 2,
                 2, Padding::kSame, Activation::kRelu6);
  // (pointwise filters, depthwise stride) for the 13 separable blocks at alpha 0.25.
  const std::pair<int, int> blocks[] = {{16, 1}, {32, 2}, {32, 1}, {64, 2}, {64, 1},
                                        {128, 2}, {128, 1}, {128, 1}, {128, 1}, {128, 1},
                                        {128, 1}, {256, 2}, {256, 1}};
  for (const auto& [filters, stride] : blocks) {
    builder.depthwise_conv2d({1, 3, 3, channels}, source.he_uniform(9 * channels, 9),
                             source.small(channels), stride, stride, Padding::kSame,
                             Activation::kRelu6);
    builder.conv2d({filters, 1, 1, channels},
                   source.he_uniform(static_cast<std::size_t>(filters) * channels, channels),
                   source.small(filters), 1, 1, Padding::kSame, Activation::kRelu6);
    channels = filters;
  }
  builder.avg_pool2d(3, 3).reshape();
  builder.fully_connected({2, channels}, source.he_uniform(2 * channels, channels), source.small(2),
                          Activation::kNone);
  return builder.softmax().build();
}

ModelGraph make_kws_reference_model(uint64_t seed) {
  WeightSource source(seed);
  const TensorInfo input{{1, 49, 43, 1}, {0.125f, -17}};
  std::vector<double> calibration(element_count(input.shape));
  for (double& v : calibration) v = source.uniform(12.0);
  GraphBuilder builder("kws_tiny_conv", input, std::move(calibration));
  builder.depthwise_conv2d({1, 10, 8, 1}, source.he_uniform(80, 80), source.small(1), 2, 2,
                           Padding::kSame, Activation::kRelu);
  builder.conv2d({8, 1, 1, 1}, source.he_uniform(8, 1), source.small(8), 1, 1, Padding::kSame,
                 Activation::kRelu);
  const std::size_t flat = element_count(builder.current().shape);
  builder.reshape();
  builder.fully_connected({6, static_cast<int32_t>(flat)}, source.he_uniform(6 * flat, flat),
                          source.small(6), Activation::kNone);
  return builder.softmax().build();
}

}  // namespace tinylift::nn
