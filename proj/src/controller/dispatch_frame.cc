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
#include "tinylift/controller/dispatch_frame.h"

#include <algorithm>
#include <cstdio>

namespace tinylift::controller {

std::string to_string(ControllerErrc code) {
  switch (code) {
    case ControllerErrc::kInvalidFloor: return "InvalidFloor";
    case ControllerErrc::kInvalidConfig: return "InvalidConfig";
    case ControllerErrc::kIllegalEvent: return "IllegalEvent";
  }
  return "ControllerError";
}

namespace {

constexpr std::array<uint8_t, 256> make_crc_table() {
  std::array<uint8_t, 256> table{};
  for (int i = 0; i < 256; ++i) {
    uint8_t crc = static_cast<uint8_t>(i);
    for (int bit = 0; bit < 8; ++bit) {
      crc = static_cast<uint8_t>((crc & 0x80) ? (crc << 1) ^ 0x07 : crc << 1);
    }
    table[i] = crc;
  }
  return table;
}

constexpr auto kCrcTable = make_crc_table();

}  // namespace

uint8_t crc8(std::span<const uint8_t> bytes) {
  uint8_t crc = 0;
  for (uint8_t b : bytes) crc = kCrcTable[crc ^ b];
  return crc;
}

DispatchFrame emit_frame(int floor, uint8_t unit_id, uint8_t seq, Millis now,
                         std::span<const int> floors) {
  if (std::find(floors.begin(), floors.end(), floor) == floors.end() || floor < 0 || floor > 255) {
    throw ControllerError(ControllerErrc::kInvalidFloor, std::to_string(floor));
  }
  const auto ts = static_cast<uint32_t>(now);
  DispatchFrame frame;
  frame.can_id = static_cast<uint16_t>(kDispatchBaseId + unit_id);
  frame.data = {kProtocolVersion,
                unit_id,
                static_cast<uint8_t>(floor),
                seq,
                static_cast<uint8_t>(ts >> 16),
                static_cast<uint8_t>(ts >> 8),
                static_cast<uint8_t>(ts),
                0};
  frame.data[7] = crc8(std::span(frame.data).first(7));
  return frame;
}

bool frame_is_valid(const DispatchFrame& frame) {
  return frame.can_id <= 0x7FF && frame.data[0] == kProtocolVersion &&
         frame.can_id == kDispatchBaseId + frame.data[1] &&
         crc8(std::span(frame.data).first(7)) == frame.data[7];
}

std::string format_frame(const DispatchFrame& frame) {
  char buf[64];
  int n = std::snprintf(buf, sizeof(buf), "can id=0x%03X data=", frame.can_id);
  for (uint8_t b : frame.data) n += std::snprintf(buf + n, sizeof(buf) - n, "%02X", b);
  return std::string(buf, n);
}

}  // namespace tinylift::controller
