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
#include "tinylift/controller/controller.h"

#include <algorithm>

namespace tinylift::controller {

void ControllerConfig::validate() const {
  auto fail = [](const std::string& what) { throw ControllerError(ControllerErrc::kInvalidConfig, what); };
  if (detect_threshold_pct < 0 || detect_threshold_pct > 100) fail("detect_threshold_pct out of 0..100");
  if (kws_threshold_pct < 0 || kws_threshold_pct > 100) fail("kws_threshold_pct out of 0..100");
  if (listen_timeout_ms <= 0 || camera_period_ms <= 0 || pd_latency_ms <= 0 ||
      kws_latency_ms <= 0 || audio_window_ms <= 0) {
    fail("all periods and latencies must be positive");
  }
  if (floors.empty()) fail("no floors configured");
  for (int f : floors) {
    if (f < 0 || f > 255) fail("floor " + std::to_string(f) + " does not fit a frame byte");
  }
  if (kDispatchBaseId + unit_id > 0x7FF) fail("unit id overflows the 11-bit identifier");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kIdle: return "Idle";
    case Mode::kListening: return "Listening";
    case Mode::kDispatching: return "Dispatching";
  }
  return "?";
}

std::string to_string(Light light) {
  switch (light) {
    case Light::kRed: return "red";
    case Light::kGreen: return "green";
    case Light::kBlue: return "blue";
  }
  return "?";
}

std::string to_string(ModelRole role) { return role == ModelRole::kPerson ? "person" : "keyword"; }

Light light_for(Mode mode) {
  switch (mode) {
    case Mode::kIdle: return Light::kRed;
    case Mode::kListening: return Light::kGreen;
    case Mode::kDispatching: return Light::kBlue;
  }
  return Light::kRed;
}

int score_to_percent(int8_t score) {
  const int s = std::max<int>(score, -127);
  return (s + 127) * 100 / 254;
}

bool decide_person(int8_t person_score, const ControllerConfig& config) {
  return score_to_percent(person_score) >= config.detect_threshold_pct;
}

std::optional<int> decide_keyword(std::span<const int8_t> scores, const ControllerConfig& config) {
  if (scores.size() != kNumKeywordClasses) return std::nullopt;
  const auto best = static_cast<std::size_t>(
      std::distance(scores.begin(), std::max_element(scores.begin(), scores.end())));
  if (best > static_cast<std::size_t>(KeywordClass::kFour)) return std::nullopt;
  if (score_to_percent(scores[best]) < config.kws_threshold_pct) return std::nullopt;
  const int floor = static_cast<int>(best) + 1;
  if (std::find(config.floors.begin(), config.floors.end(), floor) == config.floors.end()) {
    return std::nullopt;
  }
  return floor;
}

namespace {

void enter(ControllerState& state, Mode mode, std::vector<Action>& actions) {
  state.mode = mode;
  const Light light = light_for(mode);
  if (state.light != light) {
    state.light = light;
    actions.push_back(SetLight{light});
  }
}

void drop(StepResult& result, std::string reason, bool illegal) {
  result.illegal = illegal;
  result.dropped = illegal ? "IllegalEvent: " + reason : std::move(reason);
}

}  // namespace

StepResult step(const ControllerState& state, const Event& event, Millis now,
                const ControllerConfig& config) {
  StepResult result{state, {}, {}, false};
  ControllerState& next = result.state;

  // The listening window closes at the deadline regardless of what arrives.
  if (next.mode == Mode::kListening && now >= next.deadline) {
    enter(next, Mode::kIdle, result.actions);
    result.actions.push_back(ActivatePersonTenant{});
  }

  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, CameraFrame>) {
          if (next.mode != Mode::kIdle) {
            drop(result, "not idle", false);
          } else if (next.pending) {
            drop(result, "inference in flight", false);
          } else {
            next.pending = ModelRole::kPerson;
            result.actions.push_back(RunPersonInference{e.image});
          }
        } else if constexpr (std::is_same_v<T, SpectrogramReady>) {
          if (next.mode != Mode::kListening) {
            drop(result, "spectrogram while " + to_string(next.mode), true);
          } else if (next.pending) {
            drop(result, "inference in flight", false);
          } else {
            next.pending = ModelRole::kKeyword;
            result.actions.push_back(RunKeywordInference{e.features});
          }
        } else if constexpr (std::is_same_v<T, InferenceDone>) {
          if (next.pending != e.role) {
            drop(result, to_string(e.role) + " result with no matching inference in flight", true);
            return;
          }
          const std::size_t expected =
              e.role == ModelRole::kPerson ? kPersonIndex + 1 : kNumKeywordClasses;
          if (e.scores.size() != expected) {
            drop(result, to_string(e.role) + " result has " + std::to_string(e.scores.size()) +
                             " scores", true);
            return;
          }
          next.pending.reset();
          next.last_inference = ScoreRecord{e.role, e.scores, now};
          if (e.role == ModelRole::kPerson) {
            if (next.mode == Mode::kIdle && decide_person(e.scores[kPersonIndex], config)) {
              enter(next, Mode::kListening, result.actions);
              next.listen_started = now;
              next.deadline = now + config.listen_timeout_ms;
              result.actions.push_back(ActivateKeywordTenant{});
            }
          } else if (next.mode != Mode::kListening) {
            drop(result, "keyword result after listening ended", false);
          } else if (const auto floor = decide_keyword(e.scores, config)) {
            enter(next, Mode::kDispatching, result.actions);
            next.floor = *floor;
            result.actions.push_back(
                EmitFrame{emit_frame(*floor, config.unit_id, next.next_seq, now, config.floors)});
            ++next.next_seq;
          }
        } else {
          if (next.mode == Mode::kDispatching) {
            enter(next, Mode::kIdle, result.actions);
            result.actions.push_back(ActivatePersonTenant{});
          }
        }
      },
      event);
  return result;
}

namespace {

std::string join_scores(std::span<const int8_t> scores) {
  std::string s;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(scores[i]);
  }
  return s;
}

}  // namespace

std::string describe(const Event& event) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, CameraFrame>) {
          return "CameraFrame src=" + (e.source.empty() ? std::string("-") : e.source);
        } else if constexpr (std::is_same_v<T, SpectrogramReady>) {
          return "SpectrogramReady shape=" + nn::shape_to_string(e.features.shape);
        } else if constexpr (std::is_same_v<T, InferenceDone>) {
          return "InferenceDone model=" + to_string(e.role) + " scores=" + join_scores(e.scores);
        } else {
          return "Tick";
        }
      },
      event);
}

std::string describe(const Action& action) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, RunPersonInference>) {
          return "RunPersonInference";
        } else if constexpr (std::is_same_v<T, RunKeywordInference>) {
          return "RunKeywordInference";
        } else if constexpr (std::is_same_v<T, ActivateKeywordTenant>) {
          return "ActivateKeywordTenant";
        } else if constexpr (std::is_same_v<T, ActivatePersonTenant>) {
          return "ActivatePersonTenant";
        } else if constexpr (std::is_same_v<T, SetLight>) {
          return "SetLight " + to_string(a.light);
        } else {
          return "EmitFrame floor=" + std::to_string(a.frame.floor()) +
                 " seq=" + std::to_string(a.frame.seq()) + " " + format_frame(a.frame);
        }
      },
      action);
}

Controller::Controller(ControllerConfig config) : config_(std::move(config)) { config_.validate(); }

StepResult Controller::step(const Event& event, Millis now) {
  StepResult result = controller::step(state_, event, now, config_);
  state_ = result.state;
  return result;
}

}  // namespace tinylift::controller
