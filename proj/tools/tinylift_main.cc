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
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tinylift/controller/controller.h"
#include "tinylift/dsp/frontend.h"
#include "tinylift/nn/arena.h"
#include "tinylift/nn/builder.h"
#include "tinylift/nn/model.h"
#include "tinylift/sim/bench.h"
#include "tinylift/sim/config.h"
#include "tinylift/sim/fixtures.h"
#include "tinylift/sim/golden.h"
#include "tinylift/sim/harness.h"
#include "tinylift/sim/scenario.h"
#include "tinylift/sim/wav.h"
#include "tinylift/vision/frontend.h"

namespace {

using namespace tinylift;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string scores_line(const nn::QuantTensor& out, const std::vector<std::string>& labels) {
  std::string line;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const int8_t s = out.data[i];
    line += (i ? " " : "") + (i < labels.size() ? labels[i] : std::to_string(i)) + "=" +
            std::to_string(s) + "(" + std::to_string(controller::score_to_percent(s)) + "%)";
  }
  return line;
}

nn::QuantTensor run_model(const nn::ModelGraph& graph, const nn::QuantTensor& input) {
  nn::Arena arena;
  const auto token = arena.activate(graph);
  return nn::invoke(token, input);
}

nn::ModelGraph model_or_stub(const std::string& path, bool person) {
  if (!path.empty()) return nn::load_model_file(path);
  return person ? sim::make_stub_person_model() : sim::make_stub_kws_model();
}

int print_inspect(const nn::ModelGraph& graph, std::size_t capacity) {
  std::cout << nn::describe_model(graph);
  const bool flash_ok = graph.flash_size() <= nn::kFlashBudgetBytes;
  std::cout << "flash " << graph.flash_size() << " <= " << nn::kFlashBudgetBytes << " "
            << (flash_ok ? "PASS" : "FAIL") << "\n";
  const auto plan = nn::plan_arena(graph, SIZE_MAX);
  const bool arena_ok = plan.arena_bytes <= capacity;
  std::cout << "arena_peak " << plan.arena_bytes << " <= " << capacity << " "
            << (arena_ok ? "PASS" : "FAIL") << " (live peak " << plan.peak_live_bytes << ")\n";
  return flash_ok && arena_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TinyLift floor-unit toolkit"};
  app.require_subcommand(1);

  std::string wav_path, csv_out, window = "rectangular";
  bool mfcc = false;
  auto* features = app.add_subcommand("features", "Compute the 49x43 log-mel spectrogram of a WAV file");
  features->add_option("wav", wav_path)->required();
  features->add_option("--csv", csv_out, "Write CSV here instead of stdout");
  features->add_option("--window", window)->check(CLI::IsMember({"rectangular", "hann"}));
  features->add_flag("--mfcc", mfcc, "Emit 13 cepstral coefficients per slice");

  std::string pgm_path, model_path, resize = "nearest";
  auto* infer_image = app.add_subcommand("infer-image", "Run the person model on a PGM image");
  infer_image->add_option("pgm,--input", pgm_path, "P5 PGM image")->required();
  infer_image->add_option("--model", model_path, "TMLF model (default: built-in stub)");
  infer_image->add_option("--resize", resize)->check(CLI::IsMember({"nearest", "bilinear"}));

  auto* infer_audio = app.add_subcommand("infer-audio", "Run the keyword model on the last second of a WAV file");
  infer_audio->add_option("wav", wav_path)->required();
  infer_audio->add_option("--model", model_path, "TMLF model (default: built-in stub)");
  infer_audio->add_option("--window", window)->check(CLI::IsMember({"rectangular", "hann"}));

  std::string reference;
  std::size_t capacity = nn::kDefaultArenaBytes;
  auto* inspect = app.add_subcommand("inspect", "Print layers, flash size and arena plan of a model");
  inspect->add_option("tmlf", model_path);
  inspect->add_option("--reference", reference, "Inspect a built-in reference model instead")
      ->check(CLI::IsMember({"person", "kws"}));
  inspect->add_option("--arena", capacity, "Arena capacity in bytes");

  std::string scenario_path, pd_path, kws_path, config_path, transcript_out;
  auto* run = app.add_subcommand("run", "Replay a scenario under the virtual clock");
  run->add_option("scenario", scenario_path)->required();
  run->add_option("--pd", pd_path, "Person model (default: built-in stub)");
  run->add_option("--kws", kws_path, "Keyword model (default: built-in stub)");
  run->add_option("--config", config_path, "key = value configuration file");
  run->add_option("--transcript", transcript_out, "Write the transcript here instead of stdout");

  int runs = 100;
  bool csv = false;
  auto* bench = app.add_subcommand("bench", "Replay a scenario N times and report latency statistics");
  bench->add_option("scenario", scenario_path)->required();
  bench->add_option("--runs", runs)->check(CLI::PositiveNumber);
  bench->add_option("--pd", pd_path, "Person model (default: built-in stub)");
  bench->add_option("--kws", kws_path, "Keyword model (default: built-in stub)");
  bench->add_option("--config", config_path, "key = value configuration file");
  bench->add_flag("--csv", csv, "CSV output");

  std::string fixture_dir;
  auto* make_fixtures = app.add_subcommand("make-fixtures", "Write stub models, sensor files and scenarios");
  make_fixtures->add_option("dir", fixture_dir)->required();

  std::string golden_dir;
  int tolerance = 1;
  auto* verify_golden = app.add_subcommand("verify-golden", "Check recorded score fixtures against this engine");
  verify_golden->add_option("dir", golden_dir, "Directory of <stem>.wav|pgm + <stem>.scores.csv pairs")->required();
  verify_golden->add_option("--pd", pd_path, "Person model (default: built-in stub)");
  verify_golden->add_option("--kws", kws_path, "Keyword model (default: built-in stub)");
  verify_golden->add_option("--config", config_path, "key = value configuration file");
  verify_golden->add_option("--tolerance", tolerance, "Allowed difference in LSB")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*features) {
      dsp::FrontendOptions options;
      options.window = window == "hann" ? dsp::WindowKind::kHann : dsp::WindowKind::kRectangular;
      options.mfcc = mfcc;
      const auto spectrogram = dsp::build_spectrogram(sim::read_wav_file(wav_path), options);
      const auto text = dsp::spectrogram_to_csv(spectrogram);
      if (csv_out.empty()) {
        std::cout << text;
      } else {
        write_text(csv_out, text);
        std::cout << "wrote " << spectrogram.num_rows() << "x" << spectrogram.num_cols() << " to " << csv_out << "\n";
      }
      return 0;
    }
    if (*infer_image) {
      const auto graph = model_or_stub(model_path, true);
      const auto kind = resize == "bilinear" ? vision::ResizeKind::kBilinear : vision::ResizeKind::kNearest;
      const auto out = run_model(graph, sim::image_tensor(vision::read_pgm_file(pgm_path), kind));
      std::cout << scores_line(out, {"no_person", "person"}) << "\n";
      const bool person = controller::decide_person(out.data.at(controller::kPersonIndex), {});
      std::cout << "decision " << (person ? "person" : "no_person") << "\n";
      return 0;
    }
    if (*infer_audio) {
      const auto graph = model_or_stub(model_path, false);
      const auto kind = window == "hann" ? dsp::WindowKind::kHann : dsp::WindowKind::kRectangular;
      const auto out = run_model(graph, sim::audio_tensor(sim::read_wav_file(wav_path), graph.input().params, kind));
      std::cout << scores_line(out, {controller::kKeywordLabels.begin(), controller::kKeywordLabels.end()}) << "\n";
      const auto floor = controller::decide_keyword(out.data, {});
      std::cout << "decision " << (floor ? "floor " + std::to_string(*floor) : std::string("none")) << "\n";
      return 0;
    }
    if (*inspect) {
      if (reference.empty() == model_path.empty()) {
        std::cerr << "inspect: give either a model file or --reference\n";
        return 2;
      }
      if (!reference.empty()) {
        const auto graph = reference == "person" ? nn::make_person_reference_model() : nn::make_kws_reference_model();
        return print_inspect(graph, capacity);
      }
      const auto bytes = sim::read_file(model_path);
      return print_inspect(nn::parse_model(bytes), capacity);
    }
    if (*run || *bench) {
      const auto scenario = sim::load_scenario(scenario_path);
      const auto person = model_or_stub(pd_path, true);
      const auto keyword = model_or_stub(kws_path, false);
      const auto config = config_path.empty() ? sim::SimConfig{} : sim::load_config(config_path);
      if (*run) {
        const auto result = sim::run_scenario(scenario, person, keyword, config);
        if (transcript_out.empty()) {
          std::cout << result.transcript_text();
        } else {
          write_text(transcript_out, result.transcript_text());
        }
        std::size_t failed = 0;
        for (const auto& e : result.expectations) failed += !e.passed;
        std::cout << "expectations " << result.expectations.size() - failed << "/"
                  << result.expectations.size() << " passed\n";
        return result.passed() ? 0 : 1;
      }
      std::vector<sim::RunStats> stats;
      bool all_passed = true;
      for (int i = 0; i < runs; ++i) {
        auto result = sim::run_scenario(scenario, person, keyword, config);
        all_passed = all_passed && result.passed();
        stats.push_back(std::move(result.stats));
      }
      std::cout << sim::bench_report(stats, csv ? sim::ReportFormat::kCsv : sim::ReportFormat::kText);
      return all_passed ? 0 : 1;
    }
    if (*verify_golden) {
      const auto person = model_or_stub(pd_path, true);
      const auto keyword = model_or_stub(kws_path, false);
      const auto config = config_path.empty() ? sim::SimConfig{} : sim::load_config(config_path);
      const auto report = sim::verify_golden(golden_dir, person, keyword, config, tolerance);
      std::cout << report.text();
      return report.passed() ? 0 : 1;
    }
    if (*make_fixtures) {
      sim::write_fixture_set(fixture_dir);
      std::cout << "fixtures written to " << fixture_dir << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
