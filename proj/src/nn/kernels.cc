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
#include "tinylift/nn/kernels.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>

namespace tinylift::nn {

std::pair<int, int> activation_range(Activation activation, const QuantParams& output) {
  int lo = -128;
  int hi = 127;
  if (activation == Activation::kRelu || activation == Activation::kRelu6) {
    lo = std::max(lo, static_cast<int>(output.zero_point));
  }
  if (activation == Activation::kRelu6) {
    hi = std::min(hi, static_cast<int>(quantize_value(6.0, output)));
  }
  return {lo, hi};
}

namespace {

int32_t saturate_int32(int64_t v) {
  return static_cast<int32_t>(std::clamp<int64_t>(v, std::numeric_limits<int32_t>::min(),
                                                  std::numeric_limits<int32_t>::max()));
}

int8_t finish(int64_t acc, const LayerDesc& layer, int lo, int hi) {
  const int64_t scaled = scale_accumulator(saturate_int32(acc), layer.multiplier.mantissa,
                                           layer.multiplier.shift) +
                         layer.output_params.zero_point;
  return static_cast<int8_t>(std::clamp<int64_t>(scaled, lo, hi));
}

void check_kind(const LayerDesc& layer, LayerKind kind) {
  if (layer.kind != kind) {
    throw NnError(NnErrc::kShapeMismatch,
                  "expected " + to_string(kind) + " layer, got " + to_string(layer.kind));
  }
}

void check_buffers(const TensorInfo& in_info, std::span<const int8_t> in,
                   const TensorInfo& out_info, std::span<int8_t> out) {
  if (in.size() != element_count(in_info.shape) || out.size() != element_count(out_info.shape)) {
    throw NnError(NnErrc::kShapeMismatch, "buffer length does not match tensor shape");
  }
}

// Shared body of the two convolution kinds.
template <bool kDepthwise>
void convolve(const TensorInfo& in_info, std::span<const int8_t> in, const LayerDesc& layer,
              const TensorInfo& out_info, std::span<int8_t> out) {
  check_buffers(in_info, in, out_info, out);
  const WeightTensor& w = *layer.weights;
  const int in_h = in_info.shape[1], in_w = in_info.shape[2], in_c = in_info.shape[3];
  const int out_h = out_info.shape[1], out_w = out_info.shape[2], out_c = out_info.shape[3];
  const int kh = w.shape[1], kw = w.shape[2];
  const int pad_top = layer.padding == Padding::kSame ? same_padding_before(in_h, kh, layer.stride_h) : 0;
  const int pad_left = layer.padding == Padding::kSame ? same_padding_before(in_w, kw, layer.stride_w) : 0;
  const int in_zp = in_info.params.zero_point;
  const int w_zp = w.params.zero_point;
  const auto [lo, hi] = activation_range(layer.activation, layer.output_params);

  for (int oy = 0; oy < out_h; ++oy) {
    for (int ox = 0; ox < out_w; ++ox) {
      for (int oc = 0; oc < out_c; ++oc) {
        int64_t acc = layer.bias.empty() ? 0 : layer.bias[oc];
        for (int ky = 0; ky < kh; ++ky) {
          const int iy = oy * layer.stride_h - pad_top + ky;
          if (iy < 0 || iy >= in_h) continue;
          for (int kx = 0; kx < kw; ++kx) {
            const int ix = ox * layer.stride_w - pad_left + kx;
            if (ix < 0 || ix >= in_w) continue;
            const int8_t* pixel = &in[(static_cast<std::size_t>(iy) * in_w + ix) * in_c];
            if constexpr (kDepthwise) {
              const int8_t wv = w.data[(static_cast<std::size_t>(ky) * kw + kx) * in_c + oc];
              acc += (pixel[oc] - in_zp) * (wv - w_zp);
            } else {
              const int8_t* filter =
                  &w.data[((static_cast<std::size_t>(oc) * kh + ky) * kw + kx) * in_c];
              for (int ic = 0; ic < in_c; ++ic) acc += (pixel[ic] - in_zp) * (filter[ic] - w_zp);
            }
          }
        }
        out[(static_cast<std::size_t>(oy) * out_w + ox) * out_c + oc] = finish(acc, layer, lo, hi);
      }
    }
  }
}

}  // namespace

void conv2d(const TensorInfo& in_info, std::span<const int8_t> in, const LayerDesc& layer,
            const TensorInfo& out_info, std::span<int8_t> out) {
  check_kind(layer, LayerKind::kConv2D);
  convolve<false>(in_info, in, layer, out_info, out);
}

void depthwise_conv2d(const TensorInfo& in_info, std::span<const int8_t> in,
                      const LayerDesc& layer, const TensorInfo& out_info, std::span<int8_t> out) {
  check_kind(layer, LayerKind::kDepthwiseConv2D);
  convolve<true>(in_info, in, layer, out_info, out);
}

void fully_connected(const TensorInfo& in_info, std::span<const int8_t> in,
                     const LayerDesc& layer, const TensorInfo& out_info, std::span<int8_t> out) {
  check_kind(layer, LayerKind::kFullyConnected);
  check_buffers(in_info, in, out_info, out);
  const WeightTensor& w = *layer.weights;
  const std::size_t rows = static_cast<std::size_t>(w.shape[0]);
  const std::size_t cols = static_cast<std::size_t>(w.shape[1]);
  const int in_zp = in_info.params.zero_point;
  const int w_zp = w.params.zero_point;
  const auto [lo, hi] = activation_range(layer.activation, layer.output_params);
  for (std::size_t r = 0; r < rows; ++r) {
    int64_t acc = layer.bias.empty() ? 0 : layer.bias[r];
    const int8_t* row = &w.data[r * cols];
    for (std::size_t c = 0; c < cols; ++c) acc += (in[c] - in_zp) * (row[c] - w_zp);
    out[r] = finish(acc, layer, lo, hi);
  }
}

void avg_pool2d(const TensorInfo& in_info, std::span<const int8_t> in, const LayerDesc& layer,
                const TensorInfo& out_info, std::span<int8_t> out) {
  check_kind(layer, LayerKind::kAvgPool2D);
  check_buffers(in_info, in, out_info, out);
  const int in_w = in_info.shape[2], channels = in_info.shape[3];
  const int out_h = out_info.shape[1], out_w = out_info.shape[2];
  const int window = layer.stride_h * layer.stride_w;
  for (int oy = 0; oy < out_h; ++oy) {
    for (int ox = 0; ox < out_w; ++ox) {
      for (int c = 0; c < channels; ++c) {
        int64_t sum = 0;
        for (int ky = 0; ky < layer.stride_h; ++ky) {
          for (int kx = 0; kx < layer.stride_w; ++kx) {
            const int iy = oy * layer.stride_h + ky;
            const int ix = ox * layer.stride_w + kx;
            sum += in[(static_cast<std::size_t>(iy) * in_w + ix) * channels + c];
          }
        }
        out[(static_cast<std::size_t>(oy) * out_w + ox) * channels + c] =
            static_cast<int8_t>(std::clamp<int64_t>(rounding_divide(sum, window), -128, 127));
      }
    }
  }
}

void softmax_int8(const TensorInfo& in_info, std::span<const int8_t> in,
                  const TensorInfo& out_info, std::span<int8_t> out) {
  check_buffers(in_info, in, out_info, out);
  // exp(-d * scale) in Q16 for every possible int8 distance from the row max.
  std::array<uint32_t, 256> exp_table{};
  const double scale = in_info.params.scale;
  for (int d = 0; d < 256; ++d) {
    exp_table[d] = static_cast<uint32_t>(std::lround(std::exp(-d * scale) * 65536.0));
  }
  const std::size_t depth = static_cast<std::size_t>(in_info.shape.back());
  const std::size_t rows = in.size() / depth;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = in.subspan(r * depth, depth);
    const int max_q = *std::max_element(row.begin(), row.end());
    uint64_t sum = 0;
    for (int8_t q : row) sum += exp_table[max_q - q];
    for (std::size_t i = 0; i < depth; ++i) {
      const int64_t numerator = static_cast<int64_t>(exp_table[max_q - row[i]]) * 256;
      const int64_t q = rounding_divide(numerator, static_cast<int64_t>(sum)) +
                        kSoftmaxOutputParams.zero_point;
      out[r * depth + i] = static_cast<int8_t>(std::clamp<int64_t>(q, -127, 127));
    }
  }
}

void run_layer(const LayerDesc& layer, const TensorInfo& in_info, std::span<const int8_t> in,
               const TensorInfo& out_info, std::span<int8_t> out) {
  switch (layer.kind) {
    case LayerKind::kConv2D: return conv2d(in_info, in, layer, out_info, out);
    case LayerKind::kDepthwiseConv2D: return depthwise_conv2d(in_info, in, layer, out_info, out);
    case LayerKind::kFullyConnected: return fully_connected(in_info, in, layer, out_info, out);
    case LayerKind::kAvgPool2D: return avg_pool2d(in_info, in, layer, out_info, out);
    case LayerKind::kSoftmax: return softmax_int8(in_info, in, out_info, out);
    case LayerKind::kReshape:
      check_buffers(in_info, in, out_info, out);
      if (in.data() != out.data()) std::memmove(out.data(), in.data(), in.size());
      return;
  }
}

namespace {

QuantTensor apply_checked(const QuantTensor& input, const LayerDesc& layer) {
  const TensorInfo in_info{input.shape, input.params};
  if (input.data.size() != element_count(input.shape)) {
    throw NnError(NnErrc::kShapeMismatch, "tensor data does not match its shape");
  }
  TensorInfo out_info;
  try {
    out_info = infer_output(layer, in_info);
  } catch (const NnError& e) {
    throw NnError(NnErrc::kShapeMismatch, e.what());
  }
  QuantTensor out{out_info.shape, std::vector<int8_t>(element_count(out_info.shape)), out_info.params};
  run_layer(layer, in_info, input.data, out_info, out.data);
  return out;
}

}  // namespace

QuantTensor conv2d(const QuantTensor& input, const LayerDesc& layer) {
  check_kind(layer, LayerKind::kConv2D);
  return apply_checked(input, layer);
}

QuantTensor depthwise_conv2d(const QuantTensor& input, const LayerDesc& layer) {
  check_kind(layer, LayerKind::kDepthwiseConv2D);
  return apply_checked(input, layer);
}

QuantTensor fully_connected(const QuantTensor& input, const LayerDesc& layer) {
  check_kind(layer, LayerKind::kFullyConnected);
  return apply_checked(input, layer);
}

QuantTensor avg_pool2d(const QuantTensor& input, const LayerDesc& layer) {
  check_kind(layer, LayerKind::kAvgPool2D);
  return apply_checked(input, layer);
}

QuantTensor softmax_int8(const QuantTensor& input) {
  LayerDesc layer;
  layer.kind = LayerKind::kSoftmax;
  layer.output_params = kSoftmaxOutputParams;
  return apply_checked(input, layer);
}

QuantTensor reshape(const QuantTensor& input, const LayerDesc& layer) {
  check_kind(layer, LayerKind::kReshape);
  return apply_checked(input, layer);
}

QuantTensor apply_layer(const QuantTensor& input, const LayerDesc& layer) {
  return apply_checked(input, layer);
}

}  // namespace tinylift::nn
