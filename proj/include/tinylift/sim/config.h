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
#ifndef TINYLIFT_SIM_CONFIG_H_
#define TINYLIFT_SIM_CONFIG_H_

#include <cstddef>
#include <string>
#include <string_view>

#include "tinylift/controller/controller.h"
#include "tinylift/dsp/frontend.h"
#include "tinylift/error.h"
#include "tinylift/nn/model.h"
#include "tinylift/vision/frontend.h"

namespace tinylift::sim {

enum class ConfigErrc { kParseError, kUnknownKey, kBadValue, kIo };
std::string to_string(ConfigErrc code);
using ConfigError = Error<ConfigErrc>;

struct SimConfig {
  controller::ControllerConfig controller;
  std::size_t arena_capacity = nn::kDefaultArenaBytes;
  dsp::WindowKind window = dsp::WindowKind::kRectangular;
  vision::ResizeKind resize = vision::ResizeKind::kNearest;
};

// One `key = value` per line; '#' starts a comment. Keys:
//   detect_threshold_pct, kws_threshold_pct, listen_timeout_ms,
//   camera_period_ms, pd_latency_ms, kws_latency_ms, audio_window_ms,
//   floors (e.g. 1,2,3,4 or [1, 2, 3, 4]), arena_capacity,
//   window (rectangular|hann), resize (nearest|bilinear)
// Values may be double-quoted. Unset keys keep their defaults.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::string& path);

std::string format_config(const SimConfig& config);

}  // namespace tinylift::sim

#endif  // TINYLIFT_SIM_CONFIG_H_
