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
#include "tinylift/nn/model.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

namespace tinylift::nn {

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv2D: return "Conv2D";
    case LayerKind::kDepthwiseConv2D: return "DepthwiseConv2D";
    case LayerKind::kFullyConnected: return "FullyConnected";
    case LayerKind::kAvgPool2D: return "AvgPool2D";
    case LayerKind::kSoftmax: return "Softmax";
    case LayerKind::kReshape: return "Reshape";
  }
  return "Unknown";
}

std::string to_string(Padding padding) {
  return padding == Padding::kSame ? "same" : "valid";
}

std::string to_string(Activation activation) {
  switch (activation) {
    case Activation::kNone: return "none";
    case Activation::kRelu: return "relu";
    case Activation::kRelu6: return "relu6";
  }
  return "unknown";
}

bool uses_multiplier(LayerKind kind) {
  return kind == LayerKind::kConv2D || kind == LayerKind::kDepthwiseConv2D ||
         kind == LayerKind::kFullyConnected;
}

int32_t conv_output_size(int32_t in, int32_t kernel, int32_t stride, Padding padding) {
  if (padding == Padding::kSame) return (in + stride - 1) / stride;
  if (in < kernel) return 0;
  return (in - kernel) / stride + 1;
}

int32_t same_padding_before(int32_t in, int32_t kernel, int32_t stride) {
  const int32_t out = (in + stride - 1) / stride;
  const int32_t total = std::max((out - 1) * stride + kernel - in, 0);
  return total / 2;
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw NnError(NnErrc::kInvalidLayer, what); }

void check_params(const QuantParams& p, const char* what) {
  if (!(p.scale > 0.0f) || !std::isfinite(p.scale)) {
    invalid(std::string(what) + " scale must be positive and finite");
  }
}

void check_weights(const LayerDesc& layer, std::size_t rank) {
  if (!layer.weights) invalid(to_string(layer.kind) + " requires a weight tensor");
  const WeightTensor& w = *layer.weights;
  if (w.shape.size() != rank) invalid(to_string(layer.kind) + " weight rank mismatch");
  for (int32_t d : w.shape) {
    if (d < 1) invalid("weight dimension must be positive");
  }
  if (w.data.size() != element_count(w.shape)) invalid("weight data length mismatch");
  check_params(w.params, "weight");
}

void check_bias(const LayerDesc& layer, int32_t channels) {
  if (!layer.bias.empty() && layer.bias.size() != static_cast<std::size_t>(channels)) {
    invalid(to_string(layer.kind) + " bias length " + std::to_string(layer.bias.size()) +
            " != " + std::to_string(channels));
  }
}

void check_no_parameters(const LayerDesc& layer) {
  if (layer.weights || !layer.bias.empty()) invalid(to_string(layer.kind) + " takes no weights");
  if (layer.multiplier.mantissa != 0 || layer.multiplier.shift != 0) {
    invalid(to_string(layer.kind) + " takes no multiplier");
  }
  if (layer.activation != Activation::kNone) invalid(to_string(layer.kind) + " takes no activation");
}

void check_spatial_input(const LayerDesc& layer, const TensorInfo& input) {
  if (input.shape.size() != 4 || input.shape[0] != 1) {
    invalid(to_string(layer.kind) + " expects a (1,H,W,C) input, got " +
            shape_to_string(input.shape));
  }
}

}  // namespace

TensorInfo infer_output(const LayerDesc& layer, const TensorInfo& input) {
  check_params(layer.output_params, "output");
  if (layer.stride_h < 1 || layer.stride_w < 1) invalid("stride must be >= 1");
  if (uses_multiplier(layer.kind) && layer.multiplier.mantissa < kMantissaMin) {
    invalid(to_string(layer.kind) + " multiplier mantissa out of [2^30, 2^31)");
  }

  TensorInfo out{{}, layer.output_params};
  switch (layer.kind) {
    case LayerKind::kConv2D:
    case LayerKind::kDepthwiseConv2D: {
      check_spatial_input(layer, input);
      check_weights(layer, 4);
      const Shape& w = layer.weights->shape;
      const int32_t in_c = input.shape[3];
      int32_t out_c = 0;
      if (layer.kind == LayerKind::kConv2D) {
        if (w[3] != in_c) invalid("Conv2D weight input channels mismatch");
        out_c = w[0];
      } else {
        if (w[0] != 1 || w[3] != in_c) invalid("DepthwiseConv2D weight must be (1,kh,kw,C)");
        out_c = in_c;
      }
      check_bias(layer, out_c);
      const int32_t oh = conv_output_size(input.shape[1], w[1], layer.stride_h, layer.padding);
      const int32_t ow = conv_output_size(input.shape[2], w[2], layer.stride_w, layer.padding);
      if (oh < 1 || ow < 1) invalid(to_string(layer.kind) + " kernel larger than input");
      out.shape = {1, oh, ow, out_c};
      break;
    }
    case LayerKind::kFullyConnected: {
      check_weights(layer, 2);
      const Shape& w = layer.weights->shape;
      if (input.shape.empty() || input.shape[0] != 1) invalid("FullyConnected expects batch 1");
      if (static_cast<std::size_t>(w[1]) != element_count(input.shape)) {
        invalid("FullyConnected weight (" + std::to_string(w[0]) + "," + std::to_string(w[1]) +
                ") does not match input " + shape_to_string(input.shape));
      }
      check_bias(layer, w[0]);
      out.shape = {1, w[0]};
      break;
    }
    case LayerKind::kAvgPool2D: {
      check_spatial_input(layer, input);
      check_no_parameters(layer);
      if (!(layer.output_params == input.params)) invalid("AvgPool2D must keep quantization");
      const int32_t oh = input.shape[1] / layer.stride_h;
      const int32_t ow = input.shape[2] / layer.stride_w;
      if (oh < 1 || ow < 1) invalid("AvgPool2D window larger than input");
      out.shape = {1, oh, ow, input.shape[3]};
      break;
    }
    case LayerKind::kReshape: {
      check_no_parameters(layer);
      if (!(layer.output_params == input.params)) invalid("Reshape must keep quantization");
      out.shape = {1, static_cast<int32_t>(element_count(input.shape))};
      break;
    }
    case LayerKind::kSoftmax: {
      check_no_parameters(layer);
      if (!(layer.output_params == kSoftmaxOutputParams)) {
        invalid("Softmax output must be scale 1/256, zero point -128");
      }
      if (input.shape.empty()) invalid("Softmax needs at least one axis");
      out.shape = input.shape;
      break;
    }
    default:
      invalid("unknown layer kind " + std::to_string(static_cast<int>(layer.kind)));
  }
  return out;
}

ModelGraph::ModelGraph(std::string name, TensorInfo input, std::vector<LayerDesc> layers,
                       std::size_t flash_size)
    : name_(std::move(name)), layers_(std::move(layers)), flash_size_(flash_size) {
  if (name_.size() > 255) invalid("model name longer than 255 bytes");
  if (input.shape.empty() || input.shape.size() > 4) invalid("input rank must be 1..4");
  for (int32_t d : input.shape) {
    if (d < 1) invalid("input dimension must be positive");
  }
  check_params(input.params, "input");
  if (layers_.empty()) invalid("graph has no layers");
  if (layers_.back().kind != LayerKind::kSoftmax) invalid("output layer must be Softmax");

  activations_.reserve(layers_.size() + 1);
  activations_.push_back(std::move(input));
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    try {
      activations_.push_back(infer_output(layers_[i], activations_.back()));
    } catch (const NnError& e) {
      invalid("layer " + std::to_string(i) + ": " + e.what());
    }
  }
  if (flash_size_ == 0) flash_size_ = serialize_model(*this).size();
}

std::size_t ModelGraph::weight_bytes() const {
  std::size_t total = 0;
  for (const LayerDesc& layer : layers_) {
    if (layer.weights) total += layer.weights->data.size();
    total += layer.bias.size() * sizeof(int32_t);
  }
  return total;
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "model container assumes a little-endian host");

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  std::span<const uint8_t> take(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      throw NnError(NnErrc::kTruncatedStream,
                    std::string("reading ") + what + " at offset " + std::to_string(pos_));
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  template <typename T>
  T read(const char* what) {
    T value;
    std::memcpy(&value, take(sizeof(T), what).data(), sizeof(T));
    return value;
  }

  QuantParams read_params(const char* what) {
    QuantParams p;
    p.scale = read<float>(what);
    p.zero_point = read<int8_t>(what);
    return p;
  }

  Shape read_dims(std::size_t rank, const char* what) {
    Shape shape(rank);
    for (auto& d : shape) {
      const uint32_t v = read<uint32_t>(what);
      if (v == 0 || v > (1u << 24)) invalid(std::string(what) + " dimension out of range");
      d = static_cast<int32_t>(v);
    }
    return shape;
  }

  std::size_t pos() const { return pos_; }
  std::span<const uint8_t> rest() const { return bytes_.subspan(pos_); }

 private:
  std::span<const uint8_t> bytes_;
  std::size_t pos_ = 0;
};

class ByteWriter {
 public:
  template <typename T>
  void write(T value) {
    const auto* p = reinterpret_cast<const uint8_t*>(&value);
    out_.insert(out_.end(), p, p + sizeof(T));
  }
  void write_bytes(std::span<const uint8_t> bytes) { out_.insert(out_.end(), bytes.begin(), bytes.end()); }
  void write_params(const QuantParams& p) {
    write<float>(p.scale);
    write<int8_t>(p.zero_point);
  }
  void write_dims(const Shape& shape) {
    write<uint8_t>(static_cast<uint8_t>(shape.size()));
    for (int32_t d : shape) write<uint32_t>(static_cast<uint32_t>(d));
  }
  std::vector<uint8_t> take() { return std::move(out_); }

 private:
  std::vector<uint8_t> out_;
};

LayerDesc read_layer(ByteReader& in) {
  LayerDesc layer;
  const uint8_t kind = in.read<uint8_t>("layer kind");
  if (kind > static_cast<uint8_t>(LayerKind::kReshape)) invalid("unknown layer kind " + std::to_string(kind));
  layer.kind = static_cast<LayerKind>(kind);
  layer.stride_h = in.read<uint8_t>("stride");
  layer.stride_w = in.read<uint8_t>("stride");
  const uint8_t padding = in.read<uint8_t>("padding");
  if (padding > 1) invalid("unknown padding " + std::to_string(padding));
  layer.padding = static_cast<Padding>(padding);
  const uint8_t activation = in.read<uint8_t>("activation");
  if (activation > 2) invalid("unknown activation " + std::to_string(activation));
  layer.activation = static_cast<Activation>(activation);
  layer.output_params = in.read_params("output params");
  layer.multiplier.mantissa = in.read<int32_t>("multiplier");
  layer.multiplier.shift = in.read<uint8_t>("shift");

  const uint8_t rank = in.read<uint8_t>("weight rank");
  if (rank > 4) invalid("weight rank " + std::to_string(rank) + " > 4");
  if (rank > 0) {
    WeightTensor w;
    w.shape = in.read_dims(rank, "weight dims");
    w.params = in.read_params("weight params");
    auto raw = in.take(element_count(w.shape), "weight data");
    w.data.resize(raw.size());
    std::memcpy(w.data.data(), raw.data(), raw.size());
    layer.weights = std::move(w);
  }
  const uint32_t bias_count = in.read<uint32_t>("bias count");
  auto raw_bias = in.take(static_cast<std::size_t>(bias_count) * sizeof(int32_t), "bias data");
  layer.bias.resize(bias_count);
  std::memcpy(layer.bias.data(), raw_bias.data(), raw_bias.size());
  return layer;
}

}  // namespace

ModelGraph parse_model(std::span<const uint8_t> bytes) {
  if (bytes.size() > kFlashBudgetBytes) {
    throw NnError(NnErrc::kFlashBudgetExceeded,
                  std::to_string(bytes.size()) + " bytes > " + std::to_string(kFlashBudgetBytes));
  }
  ByteReader in(bytes);
  auto magic = in.take(4, "magic");
  if (!std::equal(magic.begin(), magic.end(), std::begin(kModelMagic))) {
    throw NnError(NnErrc::kBadMagic);
  }
  const uint16_t version = in.read<uint16_t>("version");
  if (version != kModelVersion) {
    throw NnError(NnErrc::kUnsupportedVersion, "version " + std::to_string(version));
  }
  const uint8_t name_len = in.read<uint8_t>("name length");
  auto name_bytes = in.take(name_len, "name");
  std::string name(name_bytes.begin(), name_bytes.end());

  TensorInfo input;
  const uint8_t rank = in.read<uint8_t>("input rank");
  if (rank < 1 || rank > 4) invalid("input rank " + std::to_string(rank));
  input.shape = in.read_dims(rank, "input dims");
  input.params = in.read_params("input params");

  const uint16_t layer_count = in.read<uint16_t>("layer count");
  std::vector<LayerDesc> layers;
  layers.reserve(layer_count);
  for (uint16_t i = 0; i < layer_count; ++i) layers.push_back(read_layer(in));

  auto rest = in.rest();
  if (std::any_of(rest.begin(), rest.end(), [](uint8_t b) { return b != 0; })) {
    throw NnError(NnErrc::kTrailingBytes, "non-zero data after offset " + std::to_string(in.pos()));
  }
  return ModelGraph(std::move(name), std::move(input), std::move(layers), bytes.size());
}

ModelGraph load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NnError(NnErrc::kTruncatedStream, "cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_model(bytes);
}

std::vector<uint8_t> serialize_model(const ModelGraph& graph) {
  ByteWriter out;
  out.write_bytes(std::span(reinterpret_cast<const uint8_t*>(kModelMagic), 4));
  out.write<uint16_t>(kModelVersion);
  out.write<uint8_t>(static_cast<uint8_t>(graph.name().size()));
  out.write_bytes(std::span(reinterpret_cast<const uint8_t*>(graph.name().data()), graph.name().size()));
  out.write_dims(graph.input().shape);
  out.write_params(graph.input().params);
  out.write<uint16_t>(static_cast<uint16_t>(graph.layers().size()));
  for (const LayerDesc& layer : graph.layers()) {
    out.write<uint8_t>(static_cast<uint8_t>(layer.kind));
    out.write<uint8_t>(layer.stride_h);
    out.write<uint8_t>(layer.stride_w);
    out.write<uint8_t>(static_cast<uint8_t>(layer.padding));
    out.write<uint8_t>(static_cast<uint8_t>(layer.activation));
    out.write_params(layer.output_params);
    out.write<int32_t>(layer.multiplier.mantissa);
    out.write<uint8_t>(layer.multiplier.shift);
    if (layer.weights) {
      out.write_dims(layer.weights->shape);
      out.write_params(layer.weights->params);
      out.write_bytes(std::span(reinterpret_cast<const uint8_t*>(layer.weights->data.data()),
                                layer.weights->data.size()));
    } else {
      out.write<uint8_t>(0);
    }
    out.write<uint32_t>(static_cast<uint32_t>(layer.bias.size()));
    for (int32_t b : layer.bias) out.write<int32_t>(b);
  }
  return out.take();
}

std::string describe_model(const ModelGraph& graph) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "model '%s'  input %s  scale=%.6g zp=%d\n",
                graph.name().c_str(), shape_to_string(graph.input().shape).c_str(),
                static_cast<double>(graph.input().params.scale), graph.input().params.zero_point);
  out += line;
  std::snprintf(line, sizeof(line), "%3s  %-16s %-8s %-6s %-6s %-18s %-20s %9s\n", "#", "kind",
                "stride", "pad", "act", "weights", "output", "params");
  out += line;
  for (std::size_t i = 0; i < graph.layers().size(); ++i) {
    const LayerDesc& layer = graph.layers()[i];
    const std::string stride = std::to_string(layer.stride_h) + "x" + std::to_string(layer.stride_w);
    const std::string weights = layer.weights ? shape_to_string(layer.weights->shape) : "-";
    const std::size_t params =
        (layer.weights ? layer.weights->data.size() : 0) + layer.bias.size() * sizeof(int32_t);
    std::snprintf(line, sizeof(line), "%3zu  %-16s %-8s %-6s %-6s %-18s %-20s %9zu\n", i,
                  to_string(layer.kind).c_str(), stride.c_str(), to_string(layer.padding).c_str(),
                  to_string(layer.activation).c_str(), weights.c_str(),
                  shape_to_string(graph.layer_output(i).shape).c_str(), params);
    out += line;
  }
  return out;
}

}  // namespace tinylift::nn
