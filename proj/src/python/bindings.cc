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
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tinylift/controller/controller.h"
#include "tinylift/controller/dispatch_frame.h"
#include "tinylift/dsp/frontend.h"
#include "tinylift/nn/arena.h"
#include "tinylift/nn/builder.h"
#include "tinylift/nn/model.h"
#include "tinylift/nn/quant.h"
#include "tinylift/sim/config.h"
#include "tinylift/sim/fixtures.h"
#include "tinylift/sim/golden.h"
#include "tinylift/sim/harness.h"
#include "tinylift/sim/scenario.h"
#include "tinylift/sim/wav.h"
#include "tinylift/vision/frontend.h"

namespace py = pybind11;
using namespace tinylift;

namespace {

dsp::WindowKind window_kind(const std::string& name) {
  if (name == "rectangular") return dsp::WindowKind::kRectangular;
  if (name == "hann") return dsp::WindowKind::kHann;
  throw py::value_error("window must be 'rectangular' or 'hann'");
}

nn::ModelGraph model_or_stub(const std::optional<std::string>& path, bool person) {
  if (path) return nn::load_model_file(*path);
  return person ? sim::make_stub_person_model() : sim::make_stub_kws_model();
}

sim::SimConfig config_or_default(const std::optional<std::string>& path) {
  return path ? sim::load_config(*path) : sim::SimConfig{};
}

std::vector<int> widen(const std::vector<int8_t>& v) { return {v.begin(), v.end()}; }

std::vector<int8_t> narrow(const std::vector<int>& v) {
  std::vector<int8_t> out;
  for (int x : v) {
    if (x < -128 || x > 127) throw py::value_error("score out of int8 range");
    out.push_back(static_cast<int8_t>(x));
  }
  return out;
}

py::dict model_info(const nn::ModelGraph& g) {
  const auto plan = nn::plan_arena(g, SIZE_MAX);
  py::dict d;
  d["name"] = g.name();
  d["input_shape"] = g.input().shape;
  d["output_shape"] = g.output().shape;
  d["layers"] = g.layers().size();
  d["flash_bytes"] = g.flash_size();
  d["arena_bytes"] = plan.arena_bytes;
  d["peak_live_bytes"] = plan.peak_live_bytes;
  d["description"] = nn::describe_model(g);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "TinyLift floor-unit stack";

  py::register_exception<nn::NnError>(m, "NnError", PyExc_RuntimeError);
  py::register_exception<dsp::DspError>(m, "DspError", PyExc_RuntimeError);
  py::register_exception<vision::VisionError>(m, "VisionError", PyExc_RuntimeError);
  py::register_exception<controller::ControllerError>(m, "ControllerError", PyExc_RuntimeError);
  py::register_exception<sim::WavError>(m, "WavError", PyExc_RuntimeError);
  py::register_exception<sim::ScenarioError>(m, "ScenarioError", PyExc_RuntimeError);
  py::register_exception<sim::ConfigError>(m, "ConfigError", PyExc_RuntimeError);
  py::register_exception<sim::GoldenError>(m, "GoldenError", PyExc_RuntimeError);

  m.def(
      "features",
      [](const std::string& wav, const std::string& window, bool mfcc) {
        dsp::FrontendOptions options;
        options.window = window_kind(window);
        options.mfcc = mfcc;
        return dsp::build_spectrogram(sim::read_wav_file(wav), options).rows;
      },
      py::arg("wav"), py::arg("window") = "rectangular", py::arg("mfcc") = false,
      "Log-mel spectrogram (49 rows) of a 16 kHz mono WAV file.");
  m.def(
      "features_csv",
      [](const std::string& wav, const std::string& window) {
        dsp::FrontendOptions options;
        options.window = window_kind(window);
        return dsp::spectrogram_to_csv(dsp::build_spectrogram(sim::read_wav_file(wav), options));
      },
      py::arg("wav"), py::arg("window") = "rectangular");
  m.def(
      "fft_magnitude",
      [](const std::vector<double>& frame) { return dsp::fft_magnitude(frame); }, py::arg("frame"));
  m.def(
      "mel_filterbank", [](const std::vector<double>& mags) { return dsp::mel_filterbank(mags); },
      py::arg("mags"));

  m.def(
      "infer_image",
      [](const std::string& pgm, const std::optional<std::string>& model, const std::string& resize) {
        const auto g = model_or_stub(model, true);
        const auto kind = resize == "bilinear" ? vision::ResizeKind::kBilinear : vision::ResizeKind::kNearest;
        nn::Arena arena;
        return widen(nn::invoke(arena.activate(g), sim::image_tensor(vision::read_pgm_file(pgm), kind)).data);
      },
      py::arg("pgm"), py::arg("model") = py::none(), py::arg("resize") = "nearest",
      "Person model scores [no_person, person] for a PGM image.");
  m.def(
      "infer_audio",
      [](const std::string& wav, const std::optional<std::string>& model, const std::string& window) {
        const auto g = model_or_stub(model, false);
        nn::Arena arena;
        const auto x = sim::audio_tensor(sim::read_wav_file(wav), g.input().params, window_kind(window));
        return widen(nn::invoke(arena.activate(g), x).data);
      },
      py::arg("wav"), py::arg("model") = py::none(), py::arg("window") = "rectangular",
      "Keyword model scores [one, two, three, four, unknown, silence] for the last second of a WAV file.");

  m.def(
      "inspect_model", [](const std::string& path) { return model_info(nn::load_model_file(path)); },
      py::arg("path"));
  m.def(
      "reference_model",
      [](const std::string& which) {
        if (which == "person") return model_info(nn::make_person_reference_model());
        if (which == "kws") return model_info(nn::make_kws_reference_model());
        throw py::value_error("which must be 'person' or 'kws'");
      },
      py::arg("which"));
  m.attr("FLASH_BUDGET_BYTES") = nn::kFlashBudgetBytes;
  m.attr("ARENA_BYTES") = nn::kDefaultArenaBytes;

  m.def("requantize", &nn::requantize, py::arg("acc"), py::arg("mantissa"), py::arg("shift"),
        py::arg("zero_point"));
  m.def(
      "quantize_multiplier",
      [](double real) {
        const auto q = nn::quantize_multiplier(real);
        return py::make_tuple(q.mantissa, q.shift);
      },
      py::arg("real"));

  m.def("score_to_percent", [](int s) { return controller::score_to_percent(narrow({s})[0]); }, py::arg("score"));
  m.def(
      "decide_person", [](int s) { return controller::decide_person(narrow({s})[0], {}); }, py::arg("score"));
  m.def(
      "decide_keyword",
      [](const std::vector<int>& scores) { return controller::decide_keyword(narrow(scores), {}); },
      py::arg("scores"));
  m.def(
      "crc8",
      [](const py::bytes& data) {
        const std::string s = data;
        return controller::crc8(std::span(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
      },
      py::arg("data"));

  m.def(
      "run_scenario",
      [](const std::string& path, const std::optional<std::string>& pd, const std::optional<std::string>& kws,
         const std::optional<std::string>& config) {
        const auto person = model_or_stub(pd, true);
        const auto keyword = model_or_stub(kws, false);
        const auto r = sim::run_scenario(sim::load_scenario(path), person, keyword, config_or_default(config));
        py::list dispatches;
        for (const auto& d : r.stats.dispatches) {
          py::dict e;
          e["unit"] = d.unit;
          e["t_ms"] = d.t_ms;
          e["floor"] = d.floor;
          e["listen_started_ms"] = d.listen_started_ms;
          dispatches.append(e);
        }
        py::list listens;
        for (const auto& l : r.stats.listens) {
          listens.append(py::make_tuple(l.unit, l.started_ms, l.ended_ms, l.dispatched));
        }
        py::dict out;
        out["transcript"] = r.transcript;
        out["passed"] = r.passed();
        out["dispatches"] = dispatches;
        out["listens"] = listens;
        out["person_latency_ms"] = r.stats.person_latency_ms;
        out["keyword_latency_ms"] = r.stats.keyword_latency_ms;
        return out;
      },
      py::arg("scenario"), py::arg("pd") = py::none(), py::arg("kws") = py::none(),
      py::arg("config") = py::none(), "Replay a scenario file under the virtual clock.");

  m.def(
      "make_fixtures", [](const std::string& dir) { sim::write_fixture_set(dir); }, py::arg("dir"),
      "Write stub models, sensor files, scenarios and golden pairs.");
  m.def(
      "verify_golden",
      [](const std::string& dir, const std::optional<std::string>& pd, const std::optional<std::string>& kws,
         int tolerance) {
        const auto person = model_or_stub(pd, true);
        const auto keyword = model_or_stub(kws, false);
        const auto report = sim::verify_golden(dir, person, keyword, {}, tolerance);
        return py::make_tuple(report.passed(), report.text());
      },
      py::arg("dir"), py::arg("pd") = py::none(), py::arg("kws") = py::none(), py::arg("tolerance") = 1);
  m.def(
      "parse_scores_csv", [](const std::string& text) { return widen(sim::parse_scores_csv(text)); },
      py::arg("text"));
}
