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
#ifndef TINYLIFT_NN_BUILDER_H_
#define TINYLIFT_NN_BUILDER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tinylift/nn/model.h"

namespace tinylift::nn {

// Asymmetric int8 parameters covering [min(lo, 0), max(hi, 0)].
QuantParams choose_params(double lo, double hi);

// Symmetric per-tensor weights (zero point 0, scale max|w| / 127).
WeightTensor quantize_weights(const Shape& shape, std::span<const double> weights);

std::vector<int32_t> quantize_bias(std::span<const double> bias, double input_scale,
                                   double weight_scale);

// Assembles a quantized graph layer by layer from real-valued weights.
// Output parameters of weighted layers are either given explicitly or
// calibrated from the float activations of a calibration input.
class GraphBuilder {
 public:
  GraphBuilder(std::string name, TensorInfo input, std::vector<double> calibration = {});

  GraphBuilder& conv2d(const Shape& weight_shape, std::span<const double> weights,
                       std::span<const double> bias, int stride_h, int stride_w, Padding padding,
                       Activation activation, std::optional<QuantParams> output = std::nullopt);
  GraphBuilder& depthwise_conv2d(const Shape& weight_shape, std::span<const double> weights,
                                 std::span<const double> bias, int stride_h, int stride_w,
                                 Padding padding, Activation activation,
                                 std::optional<QuantParams> output = std::nullopt);
  GraphBuilder& fully_connected(const Shape& weight_shape, std::span<const double> weights,
                                std::span<const double> bias, Activation activation,
                                std::optional<QuantParams> output = std::nullopt);
  GraphBuilder& avg_pool2d(int stride_h, int stride_w);
  GraphBuilder& reshape();
  GraphBuilder& softmax();

  const TensorInfo& current() const { return current_; }
  ModelGraph build() const;

 private:
  GraphBuilder& weighted(LayerKind kind, const Shape& weight_shape, std::span<const double> weights,
                         std::span<const double> bias, int stride_h, int stride_w, Padding padding,
                         Activation activation, std::optional<QuantParams> output);
  void push(LayerDesc layer);

  std::string name_;
  TensorInfo input_;
  TensorInfo current_;
  std::vector<LayerDesc> layers_;
  std::vector<double> calibration_;
};

// Canonical geometries with seeded random weights.
//   person: MobileNetV1, depth multiplier 0.25, 96x96x1 input, 2 classes
//   keyword: depthwise 10x8 /2 + pointwise 8 + FC 6 over a 49x43x1 spectrogram
ModelGraph make_person_reference_model(uint64_t seed = 1);
ModelGraph make_kws_reference_model(uint64_t seed = 1);

}  // namespace tinylift::nn

#endif  // TINYLIFT_NN_BUILDER_H_
