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
#ifndef TINYLIFT_NN_REFERENCE_H_
#define TINYLIFT_NN_REFERENCE_H_

#include <span>
#include <vector>

#include "tinylift/nn/model.h"

namespace tinylift::nn {

// Float64 interpreter used as an oracle for the int8 path. Weights and biases
// are dequantized; activations are never requantized.

std::vector<double> reference_layer(const LayerDesc& layer, const TensorInfo& in_info,
                                    std::span<const double> input, const TensorInfo& out_info);

// All activations, index 0 being `input`.
std::vector<std::vector<double>> reference_forward(const ModelGraph& graph,
                                                   std::span<const double> input);

std::vector<double> reference_invoke_float(const ModelGraph& graph, std::span<const double> input);

}  // namespace tinylift::nn

#endif  // TINYLIFT_NN_REFERENCE_H_
