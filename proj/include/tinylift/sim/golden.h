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
#ifndef TINYLIFT_SIM_GOLDEN_H_
#define TINYLIFT_SIM_GOLDEN_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tinylift/dsp/frontend.h"
#include "tinylift/error.h"
#include "tinylift/nn/model.h"
#include "tinylift/sim/config.h"

namespace tinylift::sim {

// Golden fixtures are pairs `<stem>.wav` or `<stem>.pgm` plus
// `<stem>.scores.csv` holding the int8 scores another implementation
// recorded for that input. WAV inputs go through the keyword model, PGM
// inputs through the person model.

enum class GoldenErrc { kParseError, kNoFixtures, kShapeMismatch };
std::string to_string(GoldenErrc code);
using GoldenError = Error<GoldenErrc>;

// One row of comma-separated int8 scores. Blank lines, `#` comments and a
// single non-numeric header row are ignored.
std::vector<int8_t> parse_scores_csv(std::string_view text);
std::string format_scores_csv(std::span<const int8_t> scores);

// Keyword model input for a clip: the last second, left-padded with silence.
nn::QuantTensor audio_tensor(const dsp::AudioBuffer& audio, const nn::QuantParams& params,
                             dsp::WindowKind window = dsp::WindowKind::kRectangular);

struct GoldenCase {
  std::string name;
  std::string input;
  std::vector<int8_t> expected;
  std::vector<int8_t> actual;
  int max_diff = 0;
  bool passed = false;
};

struct GoldenReport {
  std::vector<GoldenCase> cases;
  int tolerance = 1;
  bool passed() const;
  std::string text() const;
};

// Runs the matching model on one fixture input.
std::vector<int8_t> golden_scores(const std::string& input_path, const nn::ModelGraph& person_model,
                                  const nn::ModelGraph& keyword_model, const SimConfig& config = {});

GoldenReport verify_golden(const std::string& dir, const nn::ModelGraph& person_model,
                           const nn::ModelGraph& keyword_model, const SimConfig& config = {},
                           int tolerance = 1);

// Writes `<stem>.scores.csv` next to `input_path` from this engine's output.
void record_golden(const std::string& input_path, const nn::ModelGraph& person_model,
                   const nn::ModelGraph& keyword_model, const SimConfig& config = {});

}  // namespace tinylift::sim

#endif  // TINYLIFT_SIM_GOLDEN_H_
