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
#include "tinylift/nn/quant.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace tinylift::nn {

std::string to_string(NnErrc code) {
  switch (code) {
    case NnErrc::kBadMagic: return "BadMagic";
    case NnErrc::kUnsupportedVersion: return "UnsupportedVersion";
    case NnErrc::kTruncatedStream: return "TruncatedStream";
    case NnErrc::kFlashBudgetExceeded: return "FlashBudgetExceeded";
    case NnErrc::kInvalidLayer: return "InvalidLayer";
    case NnErrc::kTrailingBytes: return "TrailingBytes";
    case NnErrc::kArenaOverflow: return "ArenaOverflow";
    case NnErrc::kTenantBusy: return "TenantBusy";
    case NnErrc::kShapeMismatch: return "ShapeMismatch";
    case NnErrc::kMultiplierOutOfRange: return "MultiplierOutOfRange";
  }
  return "NnError";
}

std::size_t element_count(const Shape& shape) {
  std::size_t n = 1;
  for (int32_t d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

std::string shape_to_string(const Shape& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

std::vector<double> QuantTensor::dequantized() const {
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = dequantize(i);
  return out;
}

double RequantMultiplier::real() const {
  return std::ldexp(static_cast<double>(mantissa), -31 - static_cast<int>(shift));
}

RequantMultiplier quantize_multiplier(double multiplier) {
  if (!(multiplier > 0.0) || !(multiplier < 1.0)) {
    throw NnError(NnErrc::kMultiplierOutOfRange, std::to_string(multiplier));
  }
  int exponent = 0;
  const double fraction = std::frexp(multiplier, &exponent);  // [0.5, 1)
  int64_t mantissa = std::llround(std::ldexp(fraction, 31));
  if (mantissa == (int64_t{1} << 31)) {
    mantissa /= 2;
    ++exponent;
  }
  if (exponent > 0 || -exponent > 255) {
    throw NnError(NnErrc::kMultiplierOutOfRange, std::to_string(multiplier));
  }
  return {static_cast<int32_t>(mantissa), static_cast<uint8_t>(-exponent)};
}

int64_t scale_accumulator(int32_t acc, int32_t mantissa, int shift) {
  const int64_t product = static_cast<int64_t>(acc) * mantissa;
  const int total = 31 + shift;
  // |product| < 2^62, so anything shifted by 63 or more rounds to zero.
  if (total >= 63) return 0;
  const uint64_t magnitude = static_cast<uint64_t>(product < 0 ? -product : product);
  const uint64_t rounded = (magnitude + (uint64_t{1} << (total - 1))) >> total;
  return product < 0 ? -static_cast<int64_t>(rounded) : static_cast<int64_t>(rounded);
}

int8_t requantize(int32_t acc, int32_t mantissa, int shift, int zero_point) {
  const int64_t v = scale_accumulator(acc, mantissa, shift) + zero_point;
  return static_cast<int8_t>(std::clamp<int64_t>(v, -128, 127));
}

int64_t rounding_divide(int64_t numerator, int64_t divisor) {
  const int64_t magnitude = (std::llabs(numerator) * 2 + divisor) / (2 * divisor);
  return numerator < 0 ? -magnitude : magnitude;
}

int8_t quantize_value(double real, const QuantParams& params) {
  const double q = std::round(real / static_cast<double>(params.scale)) + params.zero_point;
  return static_cast<int8_t>(std::clamp(q, -128.0, 127.0));
}

std::vector<int8_t> quantize_values(std::span<const double> real, const QuantParams& params) {
  std::vector<int8_t> out;
  out.reserve(real.size());
  for (double r : real) out.push_back(quantize_value(r, params));
  return out;
}

}  // namespace tinylift::nn
