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
#include <cmath>
#include <cstdint>

#include <gtest/gtest.h>

#include "generators.h"
#include "oracles.h"
#include "tinylift/nn/quant.h"

namespace tinylift::nn {
namespace {

TEST(Requantize, ZeroAccumulatorGivesZeroPoint) {
  for (int zp : {-128, -5, 0, 77, 127}) EXPECT_EQ(requantize(0, kMantissaMin, 3, zp), zp);
}

TEST(Requantize, Saturates) {
  EXPECT_EQ(requantize(INT32_MAX, kMantissaMin, 0, 0), 127);
  EXPECT_EQ(requantize(INT32_MIN, kMantissaMin, 0, 0), -128);
}

TEST(Requantize, HalfwayRoundsAwayFromZero) {
  // 3 * 2^30 / 2^32 = 0.75; 2 * 2^30 / 2^32 = 0.5 -> 1; -0.5 -> -1.
  EXPECT_EQ(scale_accumulator(2, kMantissaMin, 1), 1);
  EXPECT_EQ(scale_accumulator(-2, kMantissaMin, 1), -1);
  EXPECT_EQ(scale_accumulator(1, kMantissaMin, 1), 0);
  EXPECT_EQ(scale_accumulator(3, kMantissaMin, 1), 1);
  EXPECT_EQ(scale_accumulator(-6, kMantissaMin, 1), -2);  // -1.5 -> -2
}

TEST(Requantize, MatchesBigIntegerOracle) {
  testing::Rng rng(77);
  for (int i = 0; i < 10000; ++i) {
    const auto acc = static_cast<int32_t>(rng.range(INT32_MIN, INT32_MAX));
    const auto m = static_cast<int32_t>(rng.range(kMantissaMin, INT32_MAX));
    const int shift = static_cast<int>(rng.range(0, 40));
    const int zp = static_cast<int>(rng.range(-128, 127));
    ASSERT_EQ(scale_accumulator(acc, m, shift), testing::big_scale(acc, m, shift)) << acc << " " << m << " " << shift;
    ASSERT_EQ(requantize(acc, m, shift, zp), testing::big_requantize(acc, m, shift, zp));
  }
}

TEST(Requantize, SmallAccumulatorsNearHalfwayPoints) {
  for (int acc = -4096; acc <= 4096; ++acc) {
    for (int shift : {0, 3, 9}) {
      ASSERT_EQ(scale_accumulator(acc, kMantissaMin, shift), testing::big_scale(acc, kMantissaMin, shift));
      ASSERT_EQ(scale_accumulator(acc, INT32_MAX, shift), testing::big_scale(acc, INT32_MAX, shift));
    }
  }
}

TEST(QuantizeMultiplier, RepresentsValue) {
  testing::Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const double m = std::exp(rng.uniform(std::log(1e-9), std::log(0.999999)));
    const auto q = quantize_multiplier(m);
    EXPECT_GE(q.mantissa, kMantissaMin);
    EXPECT_NEAR(q.real(), m, m * 1e-9);
  }
  const auto half = quantize_multiplier(0.5);
  EXPECT_EQ(half.mantissa, kMantissaMin);
  EXPECT_EQ(half.shift, 0);
}

TEST(QuantizeMultiplier, OutOfRange) {
  for (double m : {0.0, -0.1, 1.0, 3.0, std::nan("")}) {
    try {
      quantize_multiplier(m);
      FAIL() << m;
    } catch (const NnError& e) {
      EXPECT_EQ(e.code(), NnErrc::kMultiplierOutOfRange);
    }
  }
}

TEST(RoundingDivide, HalfAwayFromZero) {
  EXPECT_EQ(rounding_divide(5, 2), 3);
  EXPECT_EQ(rounding_divide(-5, 2), -3);
  EXPECT_EQ(rounding_divide(4, 3), 1);
  EXPECT_EQ(rounding_divide(-4, 3), -1);
  EXPECT_EQ(rounding_divide(0, 7), 0);
  for (int n = -100; n <= 100; ++n) {
    for (int d = 1; d <= 9; ++d) {
      const double exact = static_cast<double>(n) / d;
      const double expect = exact >= 0 ? std::floor(exact + 0.5) : -std::floor(-exact + 0.5);
      EXPECT_EQ(rounding_divide(n, d), static_cast<int64_t>(expect));
    }
  }
}

TEST(QuantizeValue, ClampAndRound) {
  const QuantParams p{0.5f, -10};
  EXPECT_EQ(quantize_value(0.0, p), -10);
  EXPECT_EQ(quantize_value(0.25, p), -9);  // 0.5 steps, half away from zero
  EXPECT_EQ(quantize_value(-0.25, p), -11);
  EXPECT_EQ(quantize_value(1000.0, p), 127);
  EXPECT_EQ(quantize_value(-1000.0, p), -128);
}

TEST(QuantTensor, Dequantize) {
  QuantTensor t{{1, 3}, {-128, 0, 127}, {0.25f, -28}};
  EXPECT_DOUBLE_EQ(t.dequantize(0), -25.0);
  EXPECT_DOUBLE_EQ(t.dequantize(1), 7.0);
  EXPECT_EQ(t.dequantized().size(), 3u);
}

}  // namespace
}  // namespace tinylift::nn
