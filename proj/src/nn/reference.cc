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
#include "tinylift/nn/reference.h"

#include <algorithm>
#include <cmath>

namespace tinylift::nn {

namespace {

double activate(double v, Activation activation) {
  switch (activation) {
    case Activation::kNone: return v;
    case Activation::kRelu: return std::max(v, 0.0);
    case Activation::kRelu6: return std::clamp(v, 0.0, 6.0);
  }
  return v;
}

double weight_at(const WeightTensor& w, std::size_t i) {
  return (static_cast<int>(w.data[i]) - w.params.zero_point) * static_cast<double>(w.params.scale);
}

double bias_at(const LayerDesc& layer, const TensorInfo& in_info, std::size_t i) {
  if (layer.bias.empty()) return 0.0;
  return layer.bias[i] * static_cast<double>(in_info.params.scale) *
         static_cast<double>(layer.weights->params.scale);
}

}  // namespace

std::vector<double> reference_layer(const LayerDesc& layer, const TensorInfo& in_info,
                                    std::span<const double> in, const TensorInfo& out_info) {
  if (in.size() != element_count(in_info.shape)) {
    throw NnError(NnErrc::kShapeMismatch, "reference input length mismatch");
  }
  std::vector<double> out(element_count(out_info.shape), 0.0);
  switch (layer.kind) {
    case LayerKind::kConv2D:
    case LayerKind::kDepthwiseConv2D: {
      const bool depthwise = layer.kind == LayerKind::kDepthwiseConv2D;
      const WeightTensor& w = *layer.weights;
      const int in_h = in_info.shape[1], in_w = in_info.shape[2], in_c = in_info.shape[3];
      const int out_h = out_info.shape[1], out_w = out_info.shape[2], out_c = out_info.shape[3];
      const int kh = w.shape[1], kw = w.shape[2];
      const int pad_t = layer.padding == Padding::kSame ? same_padding_before(in_h, kh, layer.stride_h) : 0;
      const int pad_l = layer.padding == Padding::kSame ? same_padding_before(in_w, kw, layer.stride_w) : 0;
      for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
          for (int oc = 0; oc < out_c; ++oc) {
            double acc = bias_at(layer, in_info, oc);
            for (int ky = 0; ky < kh; ++ky) {
              for (int kx = 0; kx < kw; ++kx) {
                const int iy = oy * layer.stride_h - pad_t + ky;
                const int ix = ox * layer.stride_w - pad_l + kx;
                if (iy < 0 || iy >= in_h || ix < 0 || ix >= in_w) continue;
                const std::size_t base = (static_cast<std::size_t>(iy) * in_w + ix) * in_c;
                if (depthwise) {
                  acc += in[base + oc] * weight_at(w, (static_cast<std::size_t>(ky) * kw + kx) * in_c + oc);
                } else {
                  for (int ic = 0; ic < in_c; ++ic) {
                    acc += in[base + ic] *
                           weight_at(w, ((static_cast<std::size_t>(oc) * kh + ky) * kw + kx) * in_c + ic);
                  }
                }
              }
            }
            out[(static_cast<std::size_t>(oy) * out_w + ox) * out_c + oc] = activate(acc, layer.activation);
          }
        }
      }
      break;
    }
    case LayerKind::kFullyConnected: {
      const WeightTensor& w = *layer.weights;
      const std::size_t rows = w.shape[0], cols = w.shape[1];
      for (std::size_t r = 0; r < rows; ++r) {
        double acc = bias_at(layer, in_info, r);
        for (std::size_t c = 0; c < cols; ++c) acc += in[c] * weight_at(w, r * cols + c);
        out[r] = activate(acc, layer.activation);
      }
      break;
    }
    case LayerKind::kAvgPool2D: {
      const int in_w = in_info.shape[2], channels = in_info.shape[3];
      const int out_h = out_info.shape[1], out_w = out_info.shape[2];
      const double window = layer.stride_h * layer.stride_w;
      for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
          for (int c = 0; c < channels; ++c) {
            double sum = 0.0;
            for (int ky = 0; ky < layer.stride_h; ++ky) {
              for (int kx = 0; kx < layer.stride_w; ++kx) {
                sum += in[((static_cast<std::size_t>(oy) * layer.stride_h + ky) * in_w +
                           ox * layer.stride_w + kx) * channels + c];
              }
            }
            out[(static_cast<std::size_t>(oy) * out_w + ox) * channels + c] = sum / window;
          }
        }
      }
      break;
    }
    case LayerKind::kSoftmax: {
      const std::size_t depth = static_cast<std::size_t>(in_info.shape.back());
      for (std::size_t r = 0; r < in.size() / depth; ++r) {
        const auto row = in.subspan(r * depth, depth);
        const double max_v = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < depth; ++i) {
          out[r * depth + i] = std::exp(row[i] - max_v);
          sum += out[r * depth + i];
        }
        for (std::size_t i = 0; i < depth; ++i) out[r * depth + i] /= sum;
      }
      break;
    }
    case LayerKind::kReshape:
      std::copy(in.begin(), in.end(), out.begin());
      break;
  }
  return out;
}

std::vector<std::vector<double>> reference_forward(const ModelGraph& graph,
                                                   std::span<const double> input) {
  if (input.size() != element_count(graph.input().shape)) {
    throw NnError(NnErrc::kShapeMismatch, "reference input length mismatch");
  }
  std::vector<std::vector<double>> activations;
  activations.emplace_back(input.begin(), input.end());
  for (std::size_t i = 0; i < graph.layers().size(); ++i) {
    activations.push_back(reference_layer(graph.layers()[i], graph.layer_input(i),
                                          activations.back(), graph.layer_output(i)));
  }
  return activations;
}

std::vector<double> reference_invoke_float(const ModelGraph& graph, std::span<const double> input) {
  return reference_forward(graph, input).back();
}

}  // namespace tinylift::nn
