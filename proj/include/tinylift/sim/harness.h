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
#ifndef TINYLIFT_SIM_HARNESS_H_
#define TINYLIFT_SIM_HARNESS_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "tinylift/controller/controller.h"
#include "tinylift/dsp/frontend.h"
#include "tinylift/nn/model.h"
#include "tinylift/sim/config.h"
#include "tinylift/sim/scenario.h"
#include "tinylift/vision/frontend.h"

namespace tinylift::sim {

// Ordering of work scheduled for the same virtual millisecond.
enum class Phase : int {
  kScenario = 0,
  kInferenceDone = 1,
  kTick = 2,
  kCapture = 3,
  kSpectrogram = 4,
  kExpectation = 5,
};

// Discrete-event clock. Time moves only when the next scheduled callback is
// popped; ties run in (phase, insertion) order.
class VirtualClock {
 public:
  using Callback = std::function<void()>;

  Millis now() const { return now_; }
  void schedule(Millis at, Phase phase, Callback callback);
  // Runs callbacks up to and including `horizon`. Returns the time of the
  // last callback run.
  Millis run_until(Millis horizon);
  bool empty() const { return queue_.empty(); }

 private:
  struct Entry {
    Millis at;
    int phase;
    uint64_t seq;
    Callback callback;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.at != b.at) return a.at > b.at;
      if (a.phase != b.phase) return a.phase > b.phase;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  Millis now_ = 0;
  uint64_t next_seq_ = 0;
};

struct DispatchRecord {
  int unit = 0;
  Millis t_ms = 0;
  int floor = 0;
  Millis listen_started_ms = 0;
  Millis capture_ms = 0;  // camera frame that led to the detection
  controller::DispatchFrame frame;
};

struct ListenRecord {
  int unit = 0;
  Millis started_ms = 0;
  Millis ended_ms = 0;
  bool dispatched = false;
};

struct ExpectationResult {
  ScenarioEvent expectation;
  bool passed = false;
  std::string actual;
};

struct RunStats {
  std::vector<Millis> person_latency_ms;
  std::vector<Millis> keyword_latency_ms;
  std::vector<DispatchRecord> dispatches;
  std::vector<ListenRecord> listens;
  std::size_t arena_peak_bytes = 0;
  std::size_t arena_capacity = 0;
  std::size_t person_flash_bytes = 0;
  std::size_t keyword_flash_bytes = 0;
  std::size_t illegal_events = 0;
  Millis end_ms = 0;
  // Host time spent inside the kernels; never written to the transcript.
  std::chrono::nanoseconds person_wall{0};
  std::chrono::nanoseconds keyword_wall{0};
};

struct RunResult {
  std::vector<std::string> transcript;
  RunStats stats;
  std::vector<ExpectationResult> expectations;

  bool passed() const;
  std::string transcript_text() const;
  // Throws kAssertionFailed naming the first failed expectation.
  void require_passed() const;
};

// Preprocessing shared by the simulator and the CLI.
nn::QuantTensor image_tensor(const vision::GrayImage& image, vision::ResizeKind resize);
nn::QuantTensor feature_tensor(const dsp::Spectrogram& spectrogram, const nn::QuantParams& params);

// Replays `scenario` through one controller loop per unit. Each unit owns an
// arena shared by both models; the person model is installed at t=0.
RunResult run_scenario(const Scenario& scenario, const nn::ModelGraph& person_model,
                       const nn::ModelGraph& keyword_model, const SimConfig& config = {});

}  // namespace tinylift::sim

#endif  // TINYLIFT_SIM_HARNESS_H_
