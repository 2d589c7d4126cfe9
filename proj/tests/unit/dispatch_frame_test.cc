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
#include <array>
#include <vector>

#include <gtest/gtest.h>

#include "generators.h"
#include "oracles.h"
#include "tinylift/controller/dispatch_frame.h"

namespace tinylift::controller {
namespace {

const std::vector<int> kFloors = {1, 2, 3, 4};

TEST(Crc8, MatchesBitwiseReference) {
  testing::Rng rng(1);
  for (int t = 0; t < 2000; ++t) {
    std::vector<uint8_t> bytes(static_cast<std::size_t>(rng.range(0, 16)));
    for (auto& b : bytes) b = static_cast<uint8_t>(rng.range(0, 255));
    ASSERT_EQ(crc8(bytes), testing::crc8_bitwise(bytes));
  }
  // CRC-8/SMBUS check value.
  const std::string check = "123456789";
  EXPECT_EQ(crc8(std::span(reinterpret_cast<const uint8_t*>(check.data()), check.size())), 0xF4);
}

TEST(EmitFrame, FirstFloorPayload) {
  const auto f = emit_frame(1, 0, 0, 0, kFloors);
  const std::array<uint8_t, 7> head = {1, 0, 1, 0, 0, 0, 0};
  for (std::size_t i = 0; i < head.size(); ++i) EXPECT_EQ(f.data[i], head[i]);
  EXPECT_EQ(f.data[7], testing::crc8_bitwise(head));
  EXPECT_EQ(f.can_id, kDispatchBaseId);
  EXPECT_TRUE(frame_is_valid(f));
}

TEST(EmitFrame, FieldsRoundTrip) {
  const auto f = emit_frame(3, 2, 9, 0x012345, kFloors);
  EXPECT_EQ(f.unit_id(), 2);
  EXPECT_EQ(f.floor(), 3);
  EXPECT_EQ(f.seq(), 9);
  EXPECT_EQ(f.timestamp_ms(), 0x012345u);
  EXPECT_EQ(f.can_id, kDispatchBaseId + 2);
  EXPECT_EQ(format_frame(f).substr(0, 14), "can id=0x2E2 d");
}

TEST(EmitFrame, InvalidFloor) {
  for (int floor : {0, 5, -1, 300}) {
    try {
      emit_frame(floor, 0, 0, 0, kFloors);
      FAIL() << floor;
    } catch (const ControllerError& e) {
      EXPECT_EQ(e.code(), ControllerErrc::kInvalidFloor);
    }
  }
}

TEST(EmitFrame, CorruptionDetected) {
  auto f = emit_frame(2, 0, 4, 1234, kFloors);
  for (std::size_t i = 0; i < 7; ++i) {
    auto g = f;
    g.data[i] ^= 0x10;
    EXPECT_FALSE(frame_is_valid(g)) << i;
  }
}

TEST(EmitFrame, ConsecutiveSequenceNumbers) {
  uint8_t seq = 254;
  const auto a = emit_frame(1, 0, seq, 0, kFloors);
  const auto b = emit_frame(2, 0, static_cast<uint8_t>(seq + 1), 10, kFloors);
  EXPECT_EQ(b.seq() - a.seq(), 1);
  const auto c = emit_frame(2, 0, static_cast<uint8_t>(b.seq() + 1), 20, kFloors);
  EXPECT_EQ(c.seq(), 0);
}

}  // namespace
}  // namespace tinylift::controller
