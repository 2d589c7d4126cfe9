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
#ifndef TINYLIFT_SIM_SCENARIO_H_
#define TINYLIFT_SIM_SCENARIO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tinylift/controller/dispatch_frame.h"
#include "tinylift/error.h"

namespace tinylift::sim {

using controller::Millis;

enum class ScenarioErrc { kParseError, kMissingFile, kNonMonotoneTime, kAssertionFailed };
std::string to_string(ScenarioErrc code);
using ScenarioError = Error<ScenarioErrc>;

enum class EventKind { kCamera, kAudio, kExpectDispatch, kExpectIdle };
std::string to_string(EventKind kind);

struct ScenarioEvent {
  Millis t_ms = 0;
  EventKind kind = EventKind::kCamera;
  int unit = 0;
  std::string path;     // camera, audio (resolved against the scenario directory)
  Millis offset_ms = 0; // audio: playback starts this far into the clip
  int floor = 0;        // expect_dispatch
  Millis until_ms = 0;  // expect_dispatch: by_ms, expect_idle: at_ms
  int line = 0;

  bool operator==(const ScenarioEvent&) const = default;
};

struct Scenario {
  std::vector<ScenarioEvent> events;

  // Latest time mentioned by any event.
  Millis horizon() const;
  std::vector<int> units() const;
};

// Grammar, one event per line, '#' comments:
//   <t_ms> camera <file.pgm> [unit=N]
//   <t_ms> audio <file.wav> [offset_ms] [unit=N]
//   <t_ms> expect_dispatch <floor> <by_ms> [unit=N]
//   <t_ms> expect_idle [at_ms] [unit=N]          (at_ms defaults to t_ms)
// Relative paths are resolved against `base_dir`. With `check_files` set,
// referenced files must exist.
Scenario parse_scenario(std::string_view text, const std::string& base_dir = ".",
                        bool check_files = true);
Scenario load_scenario(const std::string& path);

std::string format_scenario(const Scenario& scenario);

}  // namespace tinylift::sim

#endif  // TINYLIFT_SIM_SCENARIO_H_
