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
#include "tinylift/sim/golden.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tinylift/nn/arena.h"
#include "tinylift/sim/harness.h"
#include "tinylift/sim/wav.h"
#include "tinylift/vision/frontend.h"

namespace tinylift::sim {

namespace fs = std::filesystem;

std::string to_string(GoldenErrc code) {
  switch (code) {
    case GoldenErrc::kParseError: return "ParseError";
    case GoldenErrc::kNoFixtures: return "NoFixtures";
    case GoldenErrc::kShapeMismatch: return "ShapeMismatch";
  }
  return "GoldenError";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_int(const std::string& s, int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

const std::string kScoresSuffix = ".scores.csv";

}  // namespace

std::vector<int8_t> parse_scores_csv(std::string_view text) {
  std::vector<int8_t> scores;
  bool header_seen = false;
  bool row_seen = false;
  std::istringstream in{std::string(text)};
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(trim(cell));
    std::vector<int8_t> values;
    bool numeric = true;
    for (const auto& c : cells) {
      int v = 0;
      if (!parse_int(c, v)) {
        numeric = false;
        break;
      }
      if (v < -128 || v > 127) {
        throw GoldenError(GoldenErrc::kParseError, "line " + std::to_string(line_no) + ": " + c + " is not int8");
      }
      values.push_back(static_cast<int8_t>(v));
    }
    if (!numeric) {
      if (header_seen || row_seen) {
        throw GoldenError(GoldenErrc::kParseError, "line " + std::to_string(line_no) + ": non-numeric row");
      }
      header_seen = true;
      continue;
    }
    if (row_seen) throw GoldenError(GoldenErrc::kParseError, "line " + std::to_string(line_no) + ": extra row");
    row_seen = true;
    scores = std::move(values);
  }
  if (!row_seen) throw GoldenError(GoldenErrc::kParseError, "no score row");
  return scores;
}

std::string format_scores_csv(std::span<const int8_t> scores) {
  std::string s;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(scores[i]);
  }
  return s + "\n";
}

nn::QuantTensor audio_tensor(const dsp::AudioBuffer& audio, const nn::QuantParams& params,
                             dsp::WindowKind window) {
  dsp::AudioBuffer second;
  second.sample_rate = audio.sample_rate;
  const std::size_t n = std::min(audio.samples.size(), dsp::kSamplesPerSecond);
  second.samples.assign(dsp::kSamplesPerSecond - n, 0);
  second.samples.insert(second.samples.end(), audio.samples.end() - static_cast<std::ptrdiff_t>(n),
                        audio.samples.end());
  dsp::FrontendOptions options;
  options.window = window;
  return feature_tensor(dsp::build_spectrogram(second, options), params);
}

std::vector<int8_t> golden_scores(const std::string& input_path, const nn::ModelGraph& person_model,
                                  const nn::ModelGraph& keyword_model, const SimConfig& config) {
  const std::string ext = fs::path(input_path).extension().string();
  const bool audio = ext == ".wav";
  if (!audio && ext != ".pgm") {
    throw GoldenError(GoldenErrc::kShapeMismatch, input_path + ": expected .wav or .pgm");
  }
  const nn::ModelGraph& model = audio ? keyword_model : person_model;
  const nn::QuantTensor input =
      audio ? audio_tensor(read_wav_file(input_path), model.input().params, config.window)
            : image_tensor(vision::read_pgm_file(input_path), config.resize);
  nn::Arena arena(config.arena_capacity);
  return nn::invoke(arena.activate(model), input).data;
}

bool GoldenReport::passed() const {
  return !cases.empty() && std::all_of(cases.begin(), cases.end(), [](const GoldenCase& c) { return c.passed; });
}

std::string GoldenReport::text() const {
  std::ostringstream out;
  std::size_t ok = 0;
  for (const auto& c : cases) {
    ok += c.passed;
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " max_diff=" << c.max_diff << " expected="
        << trim(format_scores_csv(c.expected)) << " actual=" << trim(format_scores_csv(c.actual)) << "\n";
  }
  out << "golden " << ok << "/" << cases.size() << " within " << tolerance << " LSB\n";
  return out.str();
}

GoldenReport verify_golden(const std::string& dir, const nn::ModelGraph& person_model,
                           const nn::ModelGraph& keyword_model, const SimConfig& config, int tolerance) {
  std::vector<fs::path> csvs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > kScoresSuffix.size() && name.ends_with(kScoresSuffix)) csvs.push_back(entry.path());
  }
  std::sort(csvs.begin(), csvs.end());
  GoldenReport report;
  report.tolerance = tolerance;
  for (const auto& csv : csvs) {
    const std::string name = csv.filename().string();
    const std::string stem = name.substr(0, name.size() - kScoresSuffix.size());
    fs::path input;
    for (const char* ext : {".wav", ".pgm"}) {
      if (fs::is_regular_file(csv.parent_path() / (stem + ext))) input = csv.parent_path() / (stem + ext);
    }
    if (input.empty()) throw GoldenError(GoldenErrc::kNoFixtures, name + " has no .wav or .pgm input");
    std::ifstream in(csv, std::ios::binary);
    std::stringstream text;
    text << in.rdbuf();

    GoldenCase c;
    c.name = stem;
    c.input = input.string();
    c.expected = parse_scores_csv(text.str());
    c.actual = golden_scores(c.input, person_model, keyword_model, config);
    if (c.expected.size() != c.actual.size()) {
      c.max_diff = 255;
    } else {
      for (std::size_t i = 0; i < c.actual.size(); ++i) {
        c.max_diff = std::max(c.max_diff, std::abs(int{c.actual[i]} - int{c.expected[i]}));
      }
    }
    c.passed = c.max_diff <= tolerance;
    report.cases.push_back(std::move(c));
  }
  if (report.cases.empty()) throw GoldenError(GoldenErrc::kNoFixtures, dir);
  return report;
}

void record_golden(const std::string& input_path, const nn::ModelGraph& person_model,
                   const nn::ModelGraph& keyword_model, const SimConfig& config) {
  const auto scores = golden_scores(input_path, person_model, keyword_model, config);
  const fs::path p(input_path);
  std::ofstream out(p.parent_path() / (p.stem().string() + kScoresSuffix), std::ios::binary);
  out << format_scores_csv(scores);
}

}  // namespace tinylift::sim
