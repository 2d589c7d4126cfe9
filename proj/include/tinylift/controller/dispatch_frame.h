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
#ifndef TINYLIFT_CONTROLLER_DISPATCH_FRAME_H_
#define TINYLIFT_CONTROLLER_DISPATCH_FRAME_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tinylift/error.h"

namespace tinylift::controller {

using Millis = int64_t;

inline constexpr uint16_t kDispatchBaseId = 0x2E0;
inline constexpr uint8_t kProtocolVersion = 1;

enum class ControllerErrc { kInvalidFloor, kInvalidConfig, kIllegalEvent };
std::string to_string(ControllerErrc code);
using ControllerError = Error<ControllerErrc>;

// Classic CAN data frame, 11-bit identifier 0x2E0 + unit.
// Payload: [version, unit, floor, seq, ts_ms (low 24 bits, big-endian), crc8]
// where crc8 covers bytes 0..6.
struct DispatchFrame {
  uint16_t can_id = 0;
  std::array<uint8_t, 8> data{};

  uint8_t unit_id() const { return data[1]; }
  uint8_t floor() const { return data[2]; }
  uint8_t seq() const { return data[3]; }
  uint32_t timestamp_ms() const {
    return (uint32_t{data[4]} << 16) | (uint32_t{data[5]} << 8) | data[6];
  }

  friend bool operator==(const DispatchFrame&, const DispatchFrame&) = default;
};

// CRC-8, polynomial 0x07, initial value 0x00, no reflection, no final xor.
uint8_t crc8(std::span<const uint8_t> bytes);

DispatchFrame emit_frame(int floor, uint8_t unit_id, uint8_t seq, Millis now,
                         std::span<const int> floors);

bool frame_is_valid(const DispatchFrame& frame);

// "can id=0x2E0 data=0100030000000000"
std::string format_frame(const DispatchFrame& frame);

}  // namespace tinylift::controller

#endif  // TINYLIFT_CONTROLLER_DISPATCH_FRAME_H_
