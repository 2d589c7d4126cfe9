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
#ifndef TINYLIFT_SIM_WAV_H_
#define TINYLIFT_SIM_WAV_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tinylift/dsp/frontend.h"
#include "tinylift/error.h"

namespace tinylift::sim {

enum class WavErrc { kNotRiff, kUnsupportedEncoding, kMalformed, kIo };
std::string to_string(WavErrc code);
using WavError = Error<WavErrc>;

// Accepts only PCM (format 1), mono, 16-bit, 16 kHz. Anything else is
// rejected rather than converted.
dsp::AudioBuffer read_wav(std::span<const uint8_t> bytes);
dsp::AudioBuffer read_wav_file(const std::string& path);

std::vector<uint8_t> write_wav(const dsp::AudioBuffer& audio);
void write_file(const std::string& path, std::span<const uint8_t> bytes);
std::vector<uint8_t> read_file(const std::string& path);

}  // namespace tinylift::sim

#endif  // TINYLIFT_SIM_WAV_H_
