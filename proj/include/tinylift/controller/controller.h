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
#ifndef TINYLIFT_CONTROLLER_CONTROLLER_H_
#define TINYLIFT_CONTROLLER_CONTROLLER_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tinylift/controller/dispatch_frame.h"
#include "tinylift/nn/quant.h"

namespace tinylift::controller {

struct ControllerConfig {
  int detect_threshold_pct = 59;
  int kws_threshold_pct = 59;
  Millis listen_timeout_ms = 5000;
  Millis camera_period_ms = 200;  // 5 fps
  Millis pd_latency_ms = 740;
  Millis kws_latency_ms = 30;
  Millis audio_window_ms = 1000;
  std::vector<int> floors = {1, 2, 3, 4};
  uint8_t unit_id = 0;

  // Throws kInvalidConfig.
  void validate() const;
};

enum class Mode { kIdle, kListening, kDispatching };
enum class Light { kRed, kGreen, kBlue };
enum class ModelRole { kPerson, kKeyword };

// Keyword model output order.
enum class KeywordClass { kOne, kTwo, kThree, kFour, kUnknown, kSilence };
inline constexpr std::size_t kNumKeywordClasses = 6;
inline constexpr std::array<const char*, kNumKeywordClasses> kKeywordLabels = {
    "one", "two", "three", "four", "unknown", "silence"};

// Person model output order: [no_person, person].
inline constexpr std::size_t kPersonIndex = 1;

std::string to_string(Mode mode);
std::string to_string(Light light);
std::string to_string(ModelRole role);

Light light_for(Mode mode);

struct ScoreRecord {
  ModelRole role = ModelRole::kPerson;
  std::vector<int8_t> scores;
  Millis at = 0;
};

struct ControllerState {
  Mode mode = Mode::kIdle;
  Light light = Light::kRed;
  Millis listen_started = 0;
  Millis deadline = 0;  // valid while Listening
  int floor = 0;        // valid while Dispatching
  std::optional<ModelRole> pending;  // inference in flight
  uint8_t next_seq = 0;
  std::optional<ScoreRecord> last_inference;
};

// Events.
struct CameraFrame {
  nn::QuantTensor image;
  std::string source;
};
struct SpectrogramReady {
  nn::QuantTensor features;
};
struct InferenceDone {
  ModelRole role = ModelRole::kPerson;
  std::vector<int8_t> scores;
};
struct Tick {};
using Event = std::variant<CameraFrame, SpectrogramReady, InferenceDone, Tick>;

// Actions.
struct RunPersonInference {
  nn::QuantTensor image;
};
struct RunKeywordInference {
  nn::QuantTensor features;
};
struct ActivateKeywordTenant {};
struct ActivatePersonTenant {};
struct SetLight {
  Light light = Light::kRed;
};
struct EmitFrame {
  DispatchFrame frame;
};
using Action = std::variant<RunPersonInference, RunKeywordInference, ActivateKeywordTenant,
                            ActivatePersonTenant, SetLight, EmitFrame>;

struct StepResult {
  ControllerState state;
  std::vector<Action> actions;
  // Set when the event was dropped: "IllegalEvent: ..." for events that are
  // invalid in the current mode, or a short reason for benign skips.
  std::string dropped;
  bool illegal = false;
};

// floor((max(score,-127) + 127) * 100 / 254): -127 -> 0, +127 -> 100.
int score_to_percent(int8_t score);

bool decide_person(int8_t person_score, const ControllerConfig& config);

// Argmax with ties to the lowest index; a floor is returned only for the four
// floor classes at or above the keyword threshold.
std::optional<int> decide_keyword(std::span<const int8_t> scores, const ControllerConfig& config);

// Pure transition function.
StepResult step(const ControllerState& state, const Event& event, Millis now,
                const ControllerConfig& config);

std::string describe(const Event& event);
std::string describe(const Action& action);

// Stateful wrapper for one floor unit.
class Controller {
 public:
  explicit Controller(ControllerConfig config);

  StepResult step(const Event& event, Millis now);

  const ControllerState& state() const { return state_; }
  const ControllerConfig& config() const { return config_; }

 private:
  ControllerConfig config_;
  ControllerState state_;
};

}  // namespace tinylift::controller

#endif  // TINYLIFT_CONTROLLER_CONTROLLER_H_
