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
#ifndef TINYLIFT_NN_QUANT_H_
#define TINYLIFT_NN_QUANT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tinylift/error.h"

namespace tinylift::nn {

enum class NnErrc {
  kBadMagic,
  kUnsupportedVersion,
  kTruncatedStream,
  kFlashBudgetExceeded,
  kInvalidLayer,
  kTrailingBytes,
  kArenaOverflow,
  kTenantBusy,
  kShapeMismatch,
  kMultiplierOutOfRange,
};
std::string to_string(NnErrc code);
using NnError = Error<NnErrc>;

using Shape = std::vector<int32_t>;

std::size_t element_count(const Shape& shape);
std::string shape_to_string(const Shape& shape);

struct QuantParams {
  float scale = 1.0f;
  int8_t zero_point = 0;

  friend bool operator==(const QuantParams&, const QuantParams&) = default;
};

// Real value of element e is (e - zero_point) * scale.
struct QuantTensor {
  Shape shape;
  std::vector<int8_t> data;
  QuantParams params;

  double dequantize(std::size_t i) const {
    return (static_cast<int>(data[i]) - params.zero_point) * static_cast<double>(params.scale);
  }
  std::vector<double> dequantized() const;
};

// Real multiplier represented as mantissa * 2^(-31 - shift), mantissa in
// [2^30, 2^31). Only multipliers in (0, 1) are representable.
struct RequantMultiplier {
  int32_t mantissa = 0;
  uint8_t shift = 0;

  double real() const;
  friend bool operator==(const RequantMultiplier&, const RequantMultiplier&) = default;
};

RequantMultiplier quantize_multiplier(double multiplier);

inline constexpr int32_t kMantissaMin = int32_t{1} << 30;

// acc * mantissa * 2^(-31-shift), rounded half away from zero.
int64_t scale_accumulator(int32_t acc, int32_t mantissa, int shift);

int8_t requantize(int32_t acc, int32_t mantissa, int shift, int zero_point);

// Integer division rounded half away from zero; divisor > 0.
int64_t rounding_divide(int64_t numerator, int64_t divisor);

int8_t quantize_value(double real, const QuantParams& params);
std::vector<int8_t> quantize_values(std::span<const double> real, const QuantParams& params);

}  // namespace tinylift::nn

#endif  // TINYLIFT_NN_QUANT_H_
