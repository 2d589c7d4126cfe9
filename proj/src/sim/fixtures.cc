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
#include "tinylift/sim/fixtures.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "tinylift/nn/builder.h"
#include "tinylift/sim/golden.h"
#include "tinylift/sim/wav.h"

namespace tinylift::sim {

using controller::KeywordClass;

namespace {

constexpr int kGrid = 8;
constexpr double kPersonGain = 30.0;
constexpr double kPersonBias = 0.3;

constexpr double kToneGain = 6.0;
constexpr double kSilenceBias = 10.0;
constexpr double kSilenceGain = 2.0;
constexpr double kToneAmplitude = 8000.0;

bool centre_cell(int r, int c) { return r >= 2 && r <= 5 && c >= 2 && c <= 5; }
bool border_cell(int r, int c) { return r == 0 || c == 0 || r == kGrid - 1 || c == kGrid - 1; }

// Mel channel with the largest weight at `hz`.
int tone_channel(double hz) {
  const auto& bank = dsp::MelFilterbank::instance();
  const int bin = static_cast<int>(std::lround(hz * dsp::kFftSize / dsp::kSampleRate));
  int best = 0;
  double best_weight = -1;
  for (std::size_t c = 0; c < dsp::kNumMelChannels; ++c) {
    const double w = bank.weight(c, bin);
    if (w > best_weight) {
      best_weight = w;
      best = static_cast<int>(c);
    }
  }
  return best;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw WavError(WavErrc::kIo, "cannot write " + path.string());
  out << text;
}

}  // namespace

nn::ModelGraph make_stub_person_model() {
  const int cell = vision::kModelSide / kGrid;
  nn::GraphBuilder b("stub_person",
                     nn::TensorInfo{{1, vision::kModelSide, vision::kModelSide, 1},
                                    vision::image_input_params()});
  b.avg_pool2d(cell, cell).reshape();
  int centre = 0;
  int border = 0;
  for (int r = 0; r < kGrid; ++r) {
    for (int c = 0; c < kGrid; ++c) {
      centre += centre_cell(r, c);
      border += border_cell(r, c);
    }
  }
  std::vector<double> w(2 * kGrid * kGrid, 0.0);
  for (int r = 0; r < kGrid; ++r) {
    for (int c = 0; c < kGrid; ++c) {
      double v = 0;
      if (centre_cell(r, c)) v = kPersonGain / centre;
      if (border_cell(r, c)) v = -kPersonGain / border;
      w[kGrid * kGrid + r * kGrid + c] = v;  // person
      w[r * kGrid + c] = -v;                 // no_person
    }
  }
  // Pixels dequantize to p/256.
  const double offset = kPersonGain * kPersonBias;
  const std::vector<double> bias = {offset, -offset};
  b.fully_connected({2, kGrid * kGrid}, w, bias, nn::Activation::kNone, nn::QuantParams{0.25f, 0});
  b.softmax();
  return b.build();
}

double keyword_tone_hz(KeywordClass keyword) {
  switch (keyword) {
    case KeywordClass::kOne: return 500.0;
    case KeywordClass::kTwo: return 1000.0;
    case KeywordClass::kThree: return 1500.0;
    case KeywordClass::kFour: return 2000.0;
    default: return 0.0;
  }
}

nn::ModelGraph make_stub_kws_model() {
  const nn::QuantParams input{0.15f, -35};
  nn::GraphBuilder b("stub_kws", nn::TensorInfo{{1, dsp::kNumSlices, dsp::kNumMelChannels, 1}, input});
  b.avg_pool2d(dsp::kNumSlices, 1).reshape();

  const int n = dsp::kNumMelChannels;
  const double floor_log = std::log(dsp::kDefaultEnergyFloor);
  std::array<int, 4> tone{};
  for (int k = 0; k < 4; ++k) tone[k] = tone_channel(keyword_tone_hz(static_cast<KeywordClass>(k)));

  std::vector<double> w(6 * n, 0.0);
  std::vector<double> bias(6, 0.0);
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j < 4; ++j) w[k * n + tone[j]] += -0.25 * kToneGain;
    w[k * n + tone[k]] += kToneGain;
  }
  const int silence = static_cast<int>(KeywordClass::kSilence);
  for (int j = 0; j < 4; ++j) w[silence * n + tone[j]] = -0.25 * kSilenceGain;
  bias[silence] = kSilenceBias + kSilenceGain * floor_log;

  b.fully_connected({6, n}, w, bias, nn::Activation::kNone, nn::QuantParams{0.25f, 0});
  b.softmax();
  return b.build();
}

vision::GrayImage synth_person_image(int width, int height) {
  vision::GrayImage img{width, height, std::vector<uint8_t>(static_cast<std::size_t>(width) * height)};
  const double cx = width / 2.0;
  const double cy = height / 2.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      // Head and torso as two ellipses.
      const double hx = (x - cx) / (width * 0.12);
      const double hy = (y - cy + height * 0.18) / (height * 0.16);
      const double tx = (x - cx) / (width * 0.24);
      const double ty = (y - cy - height * 0.12) / (height * 0.30);
      const bool body = hx * hx + hy * hy <= 1.0 || tx * tx + ty * ty <= 1.0;
      img.pixels[static_cast<std::size_t>(y) * width + x] =
          static_cast<uint8_t>(body ? 215 : 35 + (x + 3 * y) % 7);
    }
  }
  return img;
}

vision::GrayImage synth_empty_image(int width, int height) {
  vision::GrayImage img{width, height, std::vector<uint8_t>(static_cast<std::size_t>(width) * height)};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img.pixels[static_cast<std::size_t>(y) * width + x] = static_cast<uint8_t>(60 + (x * 5 + y * 3) % 11);
    }
  }
  return img;
}

dsp::AudioBuffer synth_keyword(KeywordClass keyword, int duration_ms) {
  dsp::AudioBuffer audio;
  const int n = duration_ms * dsp::kSampleRate / 1000;
  audio.samples.assign(static_cast<std::size_t>(n), 0);
  if (keyword == KeywordClass::kSilence) return audio;
  if (keyword == KeywordClass::kUnknown) {
    std::mt19937 rng(7);
    for (auto& s : audio.samples) s = static_cast<int16_t>(static_cast<int>(rng() % 8001) - 4000);
    return audio;
  }
  const double hz = keyword_tone_hz(keyword);
  const int ramp = dsp::kSampleRate / 100;
  for (int i = 0; i < n; ++i) {
    const double envelope = std::min({1.0, static_cast<double>(i) / ramp, static_cast<double>(n - 1 - i) / ramp});
    const double v = kToneAmplitude * envelope * std::sin(2 * std::numbers::pi * hz * i / dsp::kSampleRate);
    audio.samples[static_cast<std::size_t>(i)] = static_cast<int16_t>(std::lround(v));
  }
  return audio;
}

dsp::AudioBuffer synth_silence(int duration_ms) { return synth_keyword(KeywordClass::kSilence, duration_ms); }

void write_fixture_set(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root);
  write_file((root / "stub_person.tmlf").string(), nn::serialize_model(make_stub_person_model()));
  write_file((root / "stub_kws.tmlf").string(), nn::serialize_model(make_stub_kws_model()));
  write_file((root / "person.pgm").string(), vision::write_pgm(synth_person_image()));
  write_file((root / "empty.pgm").string(), vision::write_pgm(synth_empty_image()));
  for (int k = 0; k < 5; ++k) {
    const auto keyword = static_cast<KeywordClass>(k);
    write_file((root / (std::string(controller::kKeywordLabels[k]) + ".wav")).string(),
               write_wav(synth_keyword(keyword)));
  }
  write_file((root / "silence_5s.wav").string(), write_wav(synth_silence(5000)));
  write_file((root / "reference_person.tmlf").string(), nn::serialize_model(nn::make_person_reference_model()));
  write_file((root / "reference_kws.tmlf").string(), nn::serialize_model(nn::make_kws_reference_model()));

  write_text(root / "happy_three.scn",
             "# person at the door, says \"three\" at 1.5 s\n"
             "0 camera person.pgm\n"
             "1500 audio three.wav\n"
             "1500 expect_dispatch 3 5000\n");
  write_text(root / "happy_four.scn",
             "0 camera person.pgm\n"
             "1500 audio four.wav\n"
             "1500 expect_dispatch 4 5000\n");
  write_text(root / "silence_timeout.scn",
             "# person detected, nothing heard\n"
             "0 camera person.pgm\n"
             "740 audio silence_5s.wav\n"
             "6000 expect_idle\n");
  write_text(root / "no_person.scn",
             "0 camera empty.pgm\n"
             "3000 expect_idle\n");
  write_text(root / "two_units.scn",
             "0 camera person.pgm unit=0\n"
             "0 camera empty.pgm unit=1\n"
             "1500 audio two.wav unit=0\n"
             "1500 expect_dispatch 2 5000 unit=0\n"
             "5000 expect_idle unit=1\n");

  // Golden pairs recorded from the stub models.
  const fs::path golden = root / "golden";
  fs::create_directories(golden);
  const auto person = make_stub_person_model();
  const auto kws = make_stub_kws_model();
  for (int k = 0; k < 5; ++k) {
    const auto path = golden / (std::string(controller::kKeywordLabels[k]) + ".wav");
    write_file(path.string(), write_wav(synth_keyword(static_cast<KeywordClass>(k))));
    record_golden(path.string(), person, kws);
  }
  write_file((golden / "person.pgm").string(), vision::write_pgm(synth_person_image()));
  write_file((golden / "empty.pgm").string(), vision::write_pgm(synth_empty_image()));
  record_golden((golden / "person.pgm").string(), person, kws);
  record_golden((golden / "empty.pgm").string(), person, kws);
}

}  // namespace tinylift::sim
