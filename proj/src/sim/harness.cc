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
#include "tinylift/sim/harness.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>

#include "tinylift/nn/arena.h"
#include "tinylift/sim/wav.h"

namespace tinylift::sim {

using controller::Action;
using controller::Mode;
using controller::ModelRole;

void VirtualClock::schedule(Millis at, Phase phase, Callback callback) {
  if (at < now_) throw std::logic_error("cannot schedule in the past");
  queue_.push(Entry{at, static_cast<int>(phase), next_seq_++, std::move(callback)});
}

Millis VirtualClock::run_until(Millis horizon) {
  while (!queue_.empty() && queue_.top().at <= horizon) {
    Entry entry = queue_.top();
    queue_.pop();
    now_ = entry.at;
    entry.callback();
  }
  return now_;
}

bool RunResult::passed() const {
  return std::all_of(expectations.begin(), expectations.end(),
                     [](const ExpectationResult& r) { return r.passed; });
}

std::string RunResult::transcript_text() const {
  std::string out;
  for (const auto& line : transcript) {
    out += line;
    out += '\n';
  }
  return out;
}

void RunResult::require_passed() const {
  for (const auto& r : expectations) {
    if (!r.passed) {
      throw ScenarioError(ScenarioErrc::kAssertionFailed,
                          "line " + std::to_string(r.expectation.line) + " " +
                              to_string(r.expectation.kind) + ": " + r.actual);
    }
  }
}

nn::QuantTensor image_tensor(const vision::GrayImage& image, vision::ResizeKind resize) {
  if (image.width == vision::kModelSide && image.height == vision::kModelSide) {
    return vision::quantize_image(image);
  }
  return vision::quantize_image(vision::resize(image, resize));
}

nn::QuantTensor feature_tensor(const dsp::Spectrogram& spectrogram, const nn::QuantParams& params) {
  const auto q = dsp::quantize_features(spectrogram, params.scale, params.zero_point);
  nn::QuantTensor t;
  t.shape = {1, static_cast<int32_t>(q.rows), static_cast<int32_t>(q.cols), 1};
  t.data = q.data;
  t.params = params;
  return t;
}

namespace {

constexpr int kSamplesPerMs = dsp::kSampleRate / 1000;

std::string base_name(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

struct Unit {
  Unit(int id, const controller::ControllerConfig& config, std::size_t capacity)
      : id(id), ctl(config), arena(capacity) {}

  int id;
  controller::Controller ctl;
  nn::Arena arena;
  nn::ActivationToken token;
  std::optional<ModelRole> deferred_activation;
  nn::InferenceLease lease;
  Millis inference_started = 0;

  std::vector<int16_t> audio;
  std::optional<nn::QuantTensor> scene;
  std::string scene_name;
  bool capturing = false;

  uint64_t listen_session = 0;
  Millis listen_started = 0;
  Millis pending_capture = 0;
  Millis detected_capture = 0;
};

class Simulation {
 public:
  Simulation(const Scenario& scenario, const nn::ModelGraph& person, const nn::ModelGraph& keyword,
             const SimConfig& config)
      : scenario_(scenario), person_(person), keyword_(keyword), config_(config) {
    config_.controller.validate();
    auto ids = scenario.units();
    if (ids.empty()) ids.push_back(0);
    for (int id : ids) {
      auto unit_config = config_.controller;
      unit_config.unit_id = static_cast<uint8_t>(id);
      units_.emplace(id, std::make_unique<Unit>(id, unit_config, config_.arena_capacity));
    }
    result_.stats.arena_capacity = config_.arena_capacity;
    result_.stats.person_flash_bytes = person.flash_size();
    result_.stats.keyword_flash_bytes = keyword.flash_size();
  }

  RunResult run() {
    for (auto& [id, unit] : units_) activate(*unit, ModelRole::kPerson);
    for (const auto& event : scenario_.events) {
      Unit& unit = *units_.at(event.unit);
      switch (event.kind) {
        case EventKind::kCamera:
          clock_.schedule(event.t_ms, Phase::kScenario, [this, &unit, &event] { on_scene(unit, event); });
          break;
        case EventKind::kAudio:
          clock_.schedule(event.t_ms, Phase::kScenario, [this, &unit, &event] { on_audio(unit, event); });
          break;
        case EventKind::kExpectDispatch:
        case EventKind::kExpectIdle:
          clock_.schedule(event.until_ms, Phase::kExpectation,
                          [this, &unit, &event] { on_expectation(unit, event); });
          break;
      }
    }
    result_.stats.end_ms = clock_.run_until(scenario_.horizon());
    for (auto& [id, unit] : units_) {
      result_.stats.arena_peak_bytes = std::max(result_.stats.arena_peak_bytes, unit->arena.peak_usage());
    }
    return std::move(result_);
  }

 private:
  void log(const Unit& unit, const char* kind, const std::string& details) {
    result_.transcript.push_back("t=" + std::to_string(clock_.now()) + " unit=" +
                                 std::to_string(unit.id) + " " + kind + " " + details);
  }

  const nn::ModelGraph& graph(ModelRole role) const {
    return role == ModelRole::kPerson ? person_ : keyword_;
  }

  // Scenario input.

  void on_scene(Unit& unit, const ScenarioEvent& event) {
    const auto image = vision::read_pgm_file(event.path);
    unit.scene = image_tensor(image, config_.resize);
    unit.scene_name = base_name(event.path);
    log(unit, "EVENT", "camera src=" + unit.scene_name + " size=" + std::to_string(image.width) + "x" +
                           std::to_string(image.height));
    if (!unit.capturing) {
      unit.capturing = true;
      const Millis period = config_.controller.camera_period_ms;
      const Millis first = (clock_.now() + period - 1) / period * period;
      clock_.schedule(first, Phase::kCapture, [this, &unit] { on_capture(unit); });
    }
  }

  void on_audio(Unit& unit, const ScenarioEvent& event) {
    const auto clip = read_wav_file(event.path);
    const std::size_t skip = static_cast<std::size_t>(event.offset_ms) * kSamplesPerMs;
    const std::size_t start = static_cast<std::size_t>(clock_.now()) * kSamplesPerMs;
    const std::size_t count = clip.samples.size() > skip ? clip.samples.size() - skip : 0;
    if (unit.audio.size() < start + count) unit.audio.resize(start + count, 0);
    for (std::size_t i = 0; i < count; ++i) {
      const int mixed = unit.audio[start + i] + clip.samples[skip + i];
      unit.audio[start + i] = static_cast<int16_t>(std::clamp(mixed, -32768, 32767));
    }
    log(unit, "EVENT", "audio src=" + base_name(event.path) + " samples=" + std::to_string(count));
  }

  void on_expectation(Unit& unit, const ScenarioEvent& event) {
    ExpectationResult r;
    r.expectation = event;
    std::string details;
    if (event.kind == EventKind::kExpectDispatch) {
      std::optional<Millis> hit;
      std::vector<std::string> others;
      for (const auto& d : result_.stats.dispatches) {
        if (d.unit != unit.id || d.t_ms < event.t_ms || d.t_ms > event.until_ms) continue;
        if (d.floor == event.floor && !hit) {
          hit = d.t_ms;
        } else {
          others.push_back(std::to_string(d.floor) + "@" + std::to_string(d.t_ms));
        }
      }
      r.passed = hit.has_value();
      if (hit) {
        r.actual = "dispatched_at=" + std::to_string(*hit);
      } else if (others.empty()) {
        r.actual = "no_dispatch";
      } else {
        r.actual = "other_floors=";
        for (std::size_t i = 0; i < others.size(); ++i) r.actual += (i ? "," : "") + others[i];
      }
      details = "expect_dispatch floor=" + std::to_string(event.floor) +
                " by=" + std::to_string(event.until_ms);
    } else {
      const Mode mode = unit.ctl.state().mode;
      r.passed = mode == Mode::kIdle;
      r.actual = "mode=" + controller::to_string(mode);
      details = "expect_idle at=" + std::to_string(event.until_ms);
    }
    log(unit, "EVENT", details + " " + (r.passed ? "PASS " : "FAIL ") + r.actual);
    result_.expectations.push_back(std::move(r));
  }

  // Periodic sensing.

  void on_capture(Unit& unit) {
    const Millis next = clock_.now() + config_.controller.camera_period_ms;
    clock_.schedule(next, Phase::kCapture, [this, &unit] { on_capture(unit); });
    const auto& state = unit.ctl.state();
    // The person pipeline only samples the camera while it owns the unit.
    if (state.mode != Mode::kIdle || state.pending) return;
    deliver(unit, controller::CameraFrame{*unit.scene, unit.scene_name});
  }

  void on_spectrogram(Unit& unit, uint64_t session) {
    if (session != unit.listen_session || unit.ctl.state().mode != Mode::kListening) return;
    const Millis now = clock_.now();
    const std::size_t window = static_cast<std::size_t>(config_.controller.audio_window_ms) * kSamplesPerMs;
    const std::size_t length = std::max<std::size_t>(window, dsp::kSamplesPerSecond);
    const auto end = static_cast<int64_t>(now) * kSamplesPerMs;
    dsp::AudioBuffer buffer;
    buffer.samples.assign(length, 0);
    for (std::size_t i = 0; i < window; ++i) {
      const int64_t src = end - static_cast<int64_t>(window) + static_cast<int64_t>(i);
      if (src >= 0 && src < static_cast<int64_t>(unit.audio.size())) {
        buffer.samples[length - window + i] = unit.audio[static_cast<std::size_t>(src)];
      }
    }
    dsp::FrontendOptions options;
    options.window = config_.window;
    const auto spectrogram = dsp::build_spectrogram(buffer, options);
    deliver(unit, controller::SpectrogramReady{feature_tensor(spectrogram, keyword_.input().params)});
    clock_.schedule(now + config_.controller.camera_period_ms, Phase::kSpectrogram,
                    [this, &unit, session] { on_spectrogram(unit, session); });
  }

  void on_deadline(Unit& unit, uint64_t session) {
    if (session != unit.listen_session || unit.ctl.state().mode != Mode::kListening) return;
    deliver(unit, controller::Tick{});
  }

  void on_inference_done(Unit& unit, ModelRole role, std::vector<int8_t> scores) {
    const Millis latency = clock_.now() - unit.inference_started;
    (role == ModelRole::kPerson ? result_.stats.person_latency_ms : result_.stats.keyword_latency_ms)
        .push_back(latency);
    unit.lease.release();
    if (unit.deferred_activation) {
      const ModelRole next = *unit.deferred_activation;
      unit.deferred_activation.reset();
      request_activation(unit, next);
    }
    deliver(unit, controller::InferenceDone{role, std::move(scores)});
  }

  // Controller plumbing.

  void deliver(Unit& unit, const controller::Event& event) {
    const Mode before = unit.ctl.state().mode;
    log(unit, "EVENT", controller::describe(event));
    const auto step = unit.ctl.step(event, clock_.now());
    if (!step.dropped.empty()) {
      log(unit, "EVENT", "dropped " + step.dropped);
      if (step.illegal) ++result_.stats.illegal_events;
    }
    const Mode after = step.state.mode;
    if (before != Mode::kListening && after == Mode::kListening) {
      unit.listen_started = clock_.now();
      unit.detected_capture = unit.pending_capture;
      result_.stats.listens.push_back({unit.id, clock_.now(), clock_.now(), false});
      begin_listening(unit);
    }
    if (before == Mode::kListening && after != Mode::kListening) {
      close_listen(unit, after == Mode::kDispatching);
    }
    for (const auto& action : step.actions) perform(unit, action);
  }

  void close_listen(Unit& unit, bool dispatched) {
    for (auto it = result_.stats.listens.rbegin(); it != result_.stats.listens.rend(); ++it) {
      if (it->unit == unit.id) {
        it->ended_ms = clock_.now();
        it->dispatched = dispatched;
        return;
      }
    }
  }

  void perform(Unit& unit, const Action& action) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, controller::RunPersonInference>) {
            log(unit, "ACTION", controller::describe(action));
            unit.pending_capture = clock_.now();
            start_inference(unit, ModelRole::kPerson, a.image);
          } else if constexpr (std::is_same_v<T, controller::RunKeywordInference>) {
            log(unit, "ACTION", controller::describe(action));
            start_inference(unit, ModelRole::kKeyword, a.features);
          } else if constexpr (std::is_same_v<T, controller::ActivateKeywordTenant>) {
            request_activation(unit, ModelRole::kKeyword);
          } else if constexpr (std::is_same_v<T, controller::ActivatePersonTenant>) {
            request_activation(unit, ModelRole::kPerson);
          } else if constexpr (std::is_same_v<T, controller::SetLight>) {
            log(unit, "ACTION", controller::describe(action));
          } else {
            log(unit, "ACTION", controller::describe(action));
            result_.stats.dispatches.push_back(DispatchRecord{unit.id, clock_.now(), a.frame.floor(),
                                                              unit.listen_started,
                                                              unit.detected_capture, a.frame});
            clock_.schedule(clock_.now(), Phase::kTick, [this, &unit] {
              if (unit.ctl.state().mode == Mode::kDispatching) deliver(unit, controller::Tick{});
            });
          }
        },
        action);
  }

  void request_activation(Unit& unit, ModelRole role) {
    const char* name = role == ModelRole::kPerson ? "ActivatePersonTenant" : "ActivateKeywordTenant";
    if (unit.arena.busy()) {
      unit.deferred_activation = role;
      log(unit, "ACTION", std::string(name) + " deferred=busy");
      return;
    }
    activate(unit, role);
  }

  void activate(Unit& unit, ModelRole role) {
    const char* name = role == ModelRole::kPerson ? "ActivatePersonTenant" : "ActivateKeywordTenant";
    unit.token = unit.arena.activate(graph(role));
    log(unit, "ACTION", std::string(name) + " model=" + graph(role).name() +
                            " arena_bytes=" + std::to_string(unit.arena.plan()->arena_bytes));
  }

  void begin_listening(Unit& unit) {
    const uint64_t session = ++unit.listen_session;
    const Millis now = clock_.now();
    clock_.schedule(now + config_.controller.audio_window_ms, Phase::kSpectrogram,
                    [this, &unit, session] { on_spectrogram(unit, session); });
    clock_.schedule(now + config_.controller.listen_timeout_ms, Phase::kTick,
                    [this, &unit, session] { on_deadline(unit, session); });
  }

  void start_inference(Unit& unit, ModelRole role, const nn::QuantTensor& input) {
    if (unit.arena.active_tenant() != &graph(role)) {
      throw std::logic_error("inference requested for an inactive tenant");
    }
    unit.lease = unit.arena.lease(unit.token);
    const auto output = unit.lease.run(input);
    (role == ModelRole::kPerson ? result_.stats.person_wall : result_.stats.keyword_wall) +=
        unit.lease.stats().wall;
    unit.inference_started = clock_.now();
    const Millis latency =
        role == ModelRole::kPerson ? config_.controller.pd_latency_ms : config_.controller.kws_latency_ms;
    clock_.schedule(clock_.now() + latency, Phase::kInferenceDone,
                    [this, &unit, role, scores = output.data]() mutable {
                      on_inference_done(unit, role, std::move(scores));
                    });
  }

  const Scenario& scenario_;
  const nn::ModelGraph& person_;
  const nn::ModelGraph& keyword_;
  SimConfig config_;
  VirtualClock clock_;
  std::map<int, std::unique_ptr<Unit>> units_;
  RunResult result_;
};

}  // namespace

RunResult run_scenario(const Scenario& scenario, const nn::ModelGraph& person_model,
                       const nn::ModelGraph& keyword_model, const SimConfig& config) {
  return Simulation(scenario, person_model, keyword_model, config).run();
}

}  // namespace tinylift::sim
