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
#ifndef TINYLIFT_NN_KERNELS_H_
#define TINYLIFT_NN_KERNELS_H_

#include <cstdint>
#include <span>
#include <utility>

#include "tinylift/nn/model.h"
#include "tinylift/nn/quant.h"

namespace tinylift::nn {

// Quantized [lo, hi] output bounds for an activation.
std::pair<int, int> activation_range(Activation activation, const QuantParams& output);

// Raw kernels over flat int8 buffers. `in` and `out` must not overlap, except
// for Reshape which tolerates in == out.
void conv2d(const TensorInfo& in_info, std::span<const int8_t> in, const LayerDesc& layer,
            const TensorInfo& out_info, std::span<int8_t> out);
void depthwise_conv2d(const TensorInfo& in_info, std::span<const int8_t> in,
                      const LayerDesc& layer, const TensorInfo& out_info, std::span<int8_t> out);
void fully_connected(const TensorInfo& in_info, std::span<const int8_t> in,
                     const LayerDesc& layer, const TensorInfo& out_info, std::span<int8_t> out);
void avg_pool2d(const TensorInfo& in_info, std::span<const int8_t> in, const LayerDesc& layer,
                const TensorInfo& out_info, std::span<int8_t> out);
void softmax_int8(const TensorInfo& in_info, std::span<const int8_t> in,
                  const TensorInfo& out_info, std::span<int8_t> out);

void run_layer(const LayerDesc& layer, const TensorInfo& in_info, std::span<const int8_t> in,
               const TensorInfo& out_info, std::span<int8_t> out);

// Tensor-level forms; the input's shape and params must be what the layer expects.
QuantTensor conv2d(const QuantTensor& input, const LayerDesc& layer);
QuantTensor depthwise_conv2d(const QuantTensor& input, const LayerDesc& layer);
QuantTensor fully_connected(const QuantTensor& input, const LayerDesc& layer);
QuantTensor avg_pool2d(const QuantTensor& input, const LayerDesc& layer);
QuantTensor softmax_int8(const QuantTensor& input);
QuantTensor reshape(const QuantTensor& input, const LayerDesc& layer);
QuantTensor apply_layer(const QuantTensor& input, const LayerDesc& layer);

}  // namespace tinylift::nn

#endif  // TINYLIFT_NN_KERNELS_H_
