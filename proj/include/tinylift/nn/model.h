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
#ifndef TINYLIFT_NN_MODEL_H_
#define TINYLIFT_NN_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tinylift/nn/quant.h"

namespace tinylift::nn {

// Flash budget of the target part: 250 KiB.
inline constexpr std::size_t kFlashBudgetBytes = 250 * 1024;
// SRAM available to the tensor arena: 256 KiB.
inline constexpr std::size_t kDefaultArenaBytes = 256 * 1024;

inline constexpr char kModelMagic[4] = {'T', 'M', 'L', 'F'};
inline constexpr uint16_t kModelVersion = 1;

enum class LayerKind : uint8_t {
  kConv2D = 0,
  kDepthwiseConv2D = 1,
  kFullyConnected = 2,
  kAvgPool2D = 3,
  kSoftmax = 4,
  kReshape = 5,
};

enum class Padding : uint8_t { kSame = 0, kValid = 1 };

enum class Activation : uint8_t { kNone = 0, kRelu = 1, kRelu6 = 2 };

std::string to_string(LayerKind kind);
std::string to_string(Padding padding);
std::string to_string(Activation activation);

bool uses_multiplier(LayerKind kind);

// Softmax emits probabilities on a fixed grid.
inline constexpr QuantParams kSoftmaxOutputParams{1.0f / 256.0f, -128};

struct WeightTensor {
  Shape shape;
  QuantParams params;
  std::vector<int8_t> data;
};

// One operator. Weight layouts:
//   Conv2D           [out_c, kh, kw, in_c]
//   DepthwiseConv2D  [1, kh, kw, c]
//   FullyConnected   [out, in]
// Bias is int32 at scale in_scale * w_scale, zero point 0; empty means none.
// AvgPool2D uses a window equal to its stride (non-overlapping, valid).
// Reshape flattens to (1, N).
struct LayerDesc {
  LayerKind kind = LayerKind::kSoftmax;
  uint8_t stride_h = 1;
  uint8_t stride_w = 1;
  Padding padding = Padding::kValid;
  Activation activation = Activation::kNone;
  QuantParams output_params;
  RequantMultiplier multiplier;
  std::optional<WeightTensor> weights;
  std::vector<int32_t> bias;
};

struct TensorInfo {
  Shape shape;
  QuantParams params;
};

// Parsed model. Immutable after load; activation tensor 0 is the graph input
// and tensor i (i >= 1) is the output of layers[i - 1].
class ModelGraph {
 public:
  ModelGraph(std::string name, TensorInfo input, std::vector<LayerDesc> layers,
             std::size_t flash_size = 0);

  const std::string& name() const { return name_; }
  const TensorInfo& input() const { return activations_.front(); }
  const TensorInfo& output() const { return activations_.back(); }
  const std::vector<LayerDesc>& layers() const { return layers_; }
  const std::vector<TensorInfo>& activations() const { return activations_; }
  const TensorInfo& layer_input(std::size_t layer) const { return activations_[layer]; }
  const TensorInfo& layer_output(std::size_t layer) const { return activations_[layer + 1]; }
  std::size_t flash_size() const { return flash_size_; }
  std::size_t weight_bytes() const;

 private:
  std::string name_;
  std::vector<LayerDesc> layers_;
  std::vector<TensorInfo> activations_;
  std::size_t flash_size_;
};

// Output geometry for one spatial axis.
int32_t conv_output_size(int32_t in, int32_t kernel, int32_t stride, Padding padding);
int32_t same_padding_before(int32_t in, int32_t kernel, int32_t stride);

// Shape inference for one layer. Throws kInvalidLayer on any inconsistency.
TensorInfo infer_output(const LayerDesc& layer, const TensorInfo& input);

// Little-endian "TMLF" container:
//   magic "TMLF", version u16 = 1, name (u8 len + bytes),
//   input rank u8 + dims u32[], input scale f32 + zero point i8,
//   layer count u16, then per layer:
//     kind u8, stride_h u8, stride_w u8, padding u8, activation u8,
//     output scale f32 + zero point i8, mantissa i32, shift u8,
//     weight tensor: rank u8 (0 = absent, nothing follows), dims u32[],
//                    scale f32, zero point i8, data i8[product(dims)],
//     bias: count u32, data i32[count].
// Zero bytes may pad the stream after the last layer.
ModelGraph parse_model(std::span<const uint8_t> bytes);
ModelGraph load_model_file(const std::string& path);

std::vector<uint8_t> serialize_model(const ModelGraph& graph);

// Human-readable layer table.
std::string describe_model(const ModelGraph& graph);

}  // namespace tinylift::nn

#endif  // TINYLIFT_NN_MODEL_H_
