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
#ifndef TINYLIFT_SIM_FIXTURES_H_
#define TINYLIFT_SIM_FIXTURES_H_

#include <string>

#include "tinylift/controller/controller.h"
#include "tinylift/dsp/frontend.h"
#include "tinylift/nn/model.h"
#include "tinylift/vision/frontend.h"

namespace tinylift::sim {

// Hand-built models with predictable outputs.
//
// Person stub: averages the image over a 8x8 grid and scores a bright centre
// against a dark border. synth_person_image saturates to person = +127,
// synth_empty_image to no_person = +127.
//
// Keyword stub: averages the spectrogram over time and compares the log-mel
// energy of four tone channels. A tone burst at keyword_tone_hz(k) wins
// class k; an all-silent window wins "silence".
nn::ModelGraph make_stub_person_model();
nn::ModelGraph make_stub_kws_model();

double keyword_tone_hz(controller::KeywordClass keyword);

vision::GrayImage synth_person_image(int width = 160, int height = 120);
vision::GrayImage synth_empty_image(int width = 160, int height = 120);

// Tone burst for the floor classes, seeded noise for kUnknown and zeros for
// kSilence.
dsp::AudioBuffer synth_keyword(controller::KeywordClass keyword, int duration_ms = 500);
dsp::AudioBuffer synth_silence(int duration_ms);

// Writes models, images, clips and scenarios into `dir`:
//   stub_person.tmlf stub_kws.tmlf reference_person.tmlf reference_kws.tmlf
//   person.pgm empty.pgm
//   one.wav two.wav three.wav four.wav unknown.wav silence_5s.wav
//   happy_three.scn happy_four.scn silence_timeout.scn no_person.scn
//   two_units.scn
void write_fixture_set(const std::string& dir);

}  // namespace tinylift::sim

#endif  // TINYLIFT_SIM_FIXTURES_H_
