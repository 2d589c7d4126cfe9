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
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>

#include "tinylift/nn/model.h"
#include "tinylift/sim/bench.h"
#include "tinylift/sim/config.h"
#include "tinylift/sim/fixtures.h"
#include "tinylift/sim/harness.h"
#include "tinylift/sim/scenario.h"
#include "tinylift/sim/wav.h"

namespace tinylift::sim {
namespace {

namespace fs = std::filesystem;

// Little-endian byte writer, independent of the library's WAV encoder.
struct Bytes {
  std::vector<uint8_t> v;
  void str(const char* s) { v.insert(v.end(), s, s + 4); }
  void u16(uint16_t x) { v.push_back(x & 0xFF); v.push_back(x >> 8); }
  void u32(uint32_t x) { for (int i = 0; i < 4; ++i) v.push_back((x >> (8 * i)) & 0xFF); }
};

std::vector<uint8_t> wav_bytes(int rate, int channels, int bits, const std::vector<int16_t>& samples) {
  Bytes b;
  const uint32_t data_len = static_cast<uint32_t>(samples.size() * 2);
  b.str("RIFF");
  b.u32(36 + data_len);
  b.str("WAVE");
  b.str("fmt ");
  b.u32(16);
  b.u16(1);
  b.u16(static_cast<uint16_t>(channels));
  b.u32(static_cast<uint32_t>(rate));
  b.u32(static_cast<uint32_t>(rate * channels * bits / 8));
  b.u16(static_cast<uint16_t>(channels * bits / 8));
  b.u16(static_cast<uint16_t>(bits));
  b.str("data");
  b.u32(data_len);
  for (int16_t s : samples) b.u16(static_cast<uint16_t>(s));
  return b.v;
}

TEST(Wav, RejectsCdQualityStereo) {
  try {
    read_wav(wav_bytes(44100, 2, 16, std::vector<int16_t>(100, 0)));
    FAIL();
  } catch (const WavError& e) {
    EXPECT_EQ(e.code(), WavErrc::kUnsupportedEncoding);
  }
}

TEST(Wav, OneSecondOfZeros) {
  const auto a = read_wav(wav_bytes(16000, 1, 16, std::vector<int16_t>(16000, 0)));
  EXPECT_EQ(a.samples, std::vector<int16_t>(16000, 0));
  EXPECT_EQ(a.sample_rate, 16000);
}

TEST(Wav, HandEncodedSamples) {
  const std::vector<int16_t> s = {1, -1, 32767, -32768};
  EXPECT_EQ(read_wav(wav_bytes(16000, 1, 16, s)).samples, s);
}

TEST(Wav, WriterRoundTrip) {
  const auto a = synth_keyword(controller::KeywordClass::kTwo);
  const auto bytes = write_wav(a);
  EXPECT_EQ(bytes.size(), 44 + a.samples.size() * 2);
  EXPECT_EQ(read_wav(bytes).samples, a.samples);
}

TEST(Wav, NotRiffAndTruncated) {
  std::vector<uint8_t> junk(64, 'x');
  try {
    read_wav(junk);
    FAIL();
  } catch (const WavError& e) {
    EXPECT_EQ(e.code(), WavErrc::kNotRiff);
  }
  auto bytes = wav_bytes(16000, 1, 16, {1, 2, 3});
  bytes.resize(30);
  EXPECT_THROW(read_wav(bytes), WavError);
}

class FixtureDir : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = (fs::temp_directory_path() / ("tinylift_sim_test_" + std::to_string(::getpid()))).string();
    fs::create_directories(dir_);
    write_fixture_set(dir_);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }
  static std::string path(const std::string& name) { return (fs::path(dir_) / name).string(); }

  static inline std::string dir_;
};

TEST_F(FixtureDir, EmptyScenario) {
  const auto s = parse_scenario("", dir_);
  EXPECT_TRUE(s.events.empty());
  std::ofstream(path("empty.scn")).close();
  EXPECT_TRUE(load_scenario(path("empty.scn")).events.empty());
}

TEST_F(FixtureDir, NonMonotoneTime) {
  try {
    parse_scenario("100 camera person.pgm\n50 camera person.pgm\n", dir_);
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.code(), ScenarioErrc::kNonMonotoneTime);
  }
}

TEST_F(FixtureDir, ThreeLineFixture) {
  const auto s = load_scenario(path("happy_three.scn"));
  ASSERT_EQ(s.events.size(), 3u);
  ScenarioEvent camera;
  camera.t_ms = 0;
  camera.kind = EventKind::kCamera;
  camera.path = path("person.pgm");
  camera.line = 2;
  ScenarioEvent audio;
  audio.t_ms = 1500;
  audio.kind = EventKind::kAudio;
  audio.path = path("three.wav");
  audio.line = 3;
  ScenarioEvent expect;
  expect.t_ms = 1500;
  expect.kind = EventKind::kExpectDispatch;
  expect.floor = 3;
  expect.until_ms = 5000;
  expect.line = 4;
  EXPECT_EQ(fs::path(s.events[0].path), fs::path(camera.path));
  camera.path = s.events[0].path;
  audio.path = s.events[1].path;
  EXPECT_EQ(s.events[0], camera);
  EXPECT_EQ(s.events[1], audio);
  EXPECT_EQ(s.events[2], expect);
  EXPECT_EQ(s.horizon(), 5000);
}

TEST_F(FixtureDir, ScenarioErrors) {
  auto code = [&](const std::string& text) {
    try {
      parse_scenario(text, dir_);
    } catch (const ScenarioError& e) {
      return e.code();
    }
    return ScenarioErrc::kAssertionFailed;
  };
  EXPECT_EQ(code("0 camera nothing_here.pgm\n"), ScenarioErrc::kMissingFile);
  EXPECT_EQ(code("0 teleport person.pgm\n"), ScenarioErrc::kParseError);
  EXPECT_EQ(code("abc camera person.pgm\n"), ScenarioErrc::kParseError);
  EXPECT_EQ(code("0 expect_dispatch\n"), ScenarioErrc::kParseError);
  EXPECT_EQ(code("# comment only\n\n"), ScenarioErrc::kAssertionFailed);
}

TEST_F(FixtureDir, FormatRoundTrip) {
  const auto s = load_scenario(path("two_units.scn"));
  const auto again = parse_scenario(format_scenario(s), dir_);
  ASSERT_EQ(again.events.size(), s.events.size());
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    EXPECT_EQ(again.events[i].t_ms, s.events[i].t_ms);
    EXPECT_EQ(again.events[i].kind, s.events[i].kind);
    EXPECT_EQ(again.events[i].unit, s.events[i].unit);
  }
}

TEST(Config, ParseAndFormat) {
  const auto c = parse_config(
      "# tuned\npd_latency_ms = 700\nkws_threshold_pct = 70\nfloors = [1, 2, 3]\narena_capacity = 65536\n"
      "window = hann\n");
  EXPECT_EQ(c.controller.pd_latency_ms, 700);
  EXPECT_EQ(c.controller.kws_threshold_pct, 70);
  EXPECT_EQ(c.controller.floors, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(c.arena_capacity, 65536u);
  EXPECT_EQ(c.window, dsp::WindowKind::kHann);
  const auto again = parse_config(format_config(c));
  EXPECT_EQ(again.controller.floors, c.controller.floors);
  EXPECT_EQ(again.controller.pd_latency_ms, 700);
}

TEST(Config, Errors) {
  auto code = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.code();
    }
    return ConfigErrc::kIo;
  };
  EXPECT_EQ(code("bogus = 1\n"), ConfigErrc::kUnknownKey);
  EXPECT_EQ(code("pd_latency_ms = soon\n"), ConfigErrc::kBadValue);
  EXPECT_EQ(code("pd_latency_ms 700\n"), ConfigErrc::kParseError);
  EXPECT_EQ(code("detect_threshold_pct = 150\n"), ConfigErrc::kBadValue);
}

class Harness : public FixtureDir {
 protected:
  RunResult run(const std::string& scn, const SimConfig& cfg = {}) {
    return run_scenario(load_scenario(path(scn)), person_, kws_, cfg);
  }
  nn::ModelGraph person_ = make_stub_person_model();
  nn::ModelGraph kws_ = make_stub_kws_model();
};

TEST_F(Harness, NoPersonNeverLeavesIdle) {
  const auto r = run("no_person.scn");
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.stats.dispatches.empty());
  EXPECT_TRUE(r.stats.listens.empty());
  for (const auto& line : r.transcript) {
    EXPECT_EQ(line.find("SetLight"), std::string::npos) << line;
    EXPECT_EQ(line.find("EmitFrame"), std::string::npos) << line;
  }
}

TEST_F(Harness, HappyPathTranscript) {
  const auto r = run("happy_three.scn");
  ASSERT_TRUE(r.passed());
  const std::vector<std::string> head = {
      "t=0 unit=0 ACTION ActivatePersonTenant model=stub_person arena_bytes=9280",
      "t=0 unit=0 EVENT camera src=person.pgm size=160x120",
      "t=0 unit=0 EVENT CameraFrame src=person.pgm",
      "t=0 unit=0 ACTION RunPersonInference",
      "t=740 unit=0 EVENT InferenceDone model=person scores=-127,127",
      "t=740 unit=0 ACTION SetLight green",
      "t=740 unit=0 ACTION ActivateKeywordTenant model=stub_kws arena_bytes=2151",
      "t=1500 unit=0 EVENT audio src=three.wav samples=8000",
      "t=1740 unit=0 EVENT SpectrogramReady shape=(1,49,43,1)",
      "t=1740 unit=0 ACTION RunKeywordInference",
  };
  ASSERT_GE(r.transcript.size(), head.size() + 6);
  for (std::size_t i = 0; i < head.size(); ++i) EXPECT_EQ(r.transcript[i], head[i]);
  EXPECT_EQ(r.transcript[10].rfind("t=1770 unit=0 EVENT InferenceDone model=keyword scores=", 0), 0u);
  EXPECT_EQ(r.transcript[11], "t=1770 unit=0 ACTION SetLight blue");
  EXPECT_EQ(r.transcript[12].rfind("t=1770 unit=0 ACTION EmitFrame floor=3 seq=0 can id=0x2E0", 0), 0u);
  EXPECT_EQ(r.transcript[13], "t=1770 unit=0 EVENT Tick");
  EXPECT_EQ(r.transcript[14], "t=1770 unit=0 ACTION SetLight red");

  ASSERT_EQ(r.stats.dispatches.size(), 1u);
  const auto& d = r.stats.dispatches.front();
  EXPECT_EQ(d.floor, 3);
  EXPECT_EQ(d.t_ms, 1770);
  EXPECT_LE(d.t_ms, 5000);
  EXPECT_EQ(d.listen_started_ms, 740);
  EXPECT_TRUE(controller::frame_is_valid(d.frame));
}

TEST_F(Harness, SilenceTimesOutAfterFiveSeconds) {
  const auto r = run("silence_timeout.scn");
  ASSERT_TRUE(r.passed());
  EXPECT_TRUE(r.stats.dispatches.empty());
  ASSERT_FALSE(r.stats.listens.empty());
  EXPECT_EQ(r.stats.listens.front().ended_ms - r.stats.listens.front().started_ms, 5000);
  EXPECT_FALSE(r.stats.listens.front().dispatched);
}

TEST_F(Harness, EachExpectationReportedOnce) {
  for (const char* scn : {"happy_three.scn", "happy_four.scn", "silence_timeout.scn", "no_person.scn",
                          "two_units.scn"}) {
    const auto s = load_scenario(path(scn));
    const auto r = run_scenario(s, person_, kws_);
    std::size_t expected = 0;
    for (const auto& e : s.events) expected += e.kind == EventKind::kExpectDispatch || e.kind == EventKind::kExpectIdle;
    EXPECT_EQ(r.expectations.size(), expected) << scn;
    std::size_t lines = 0;
    for (const auto& l : r.transcript) lines += l.find(" EVENT expect_") != std::string::npos;
    EXPECT_EQ(lines, expected) << scn;
    EXPECT_TRUE(r.passed()) << scn;
  }
}

TEST_F(Harness, FailedExpectationIsReported) {
  auto s = load_scenario(path("happy_three.scn"));
  s.events[2].floor = 4;
  const auto r = run_scenario(s, person_, kws_);
  EXPECT_FALSE(r.passed());
  try {
    r.require_passed();
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.code(), ScenarioErrc::kAssertionFailed);
  }
}

TEST_F(Harness, Deterministic) {
  const auto a = run("two_units.scn");
  const auto b = run("two_units.scn");
  EXPECT_EQ(a.transcript_text(), b.transcript_text());
}

TEST_F(Harness, LatencyConfigShiftsDispatch) {
  SimConfig cfg;
  cfg.controller.pd_latency_ms = 500;
  const auto r = run("happy_three.scn", cfg);
  ASSERT_EQ(r.stats.dispatches.size(), 1u);
  EXPECT_EQ(r.stats.dispatches.front().listen_started_ms, 500);
}

TEST_F(Harness, ArenaTooSmall) {
  SimConfig cfg;
  cfg.arena_capacity = 1024;
  EXPECT_THROW(run("happy_three.scn", cfg), nn::NnError);
}

TEST_F(Harness, BenchOfIdenticalRuns) {
  const auto s = load_scenario(path("happy_three.scn"));
  std::vector<RunStats> runs;
  for (int i = 0; i < 100; ++i) runs.push_back(run_scenario(s, person_, kws_).stats);
  const auto summary = summarize(runs);
  EXPECT_EQ(summary.runs, 100u);
  for (const auto& p : summary.phases) {
    if (p.count == 0) continue;
    EXPECT_EQ(p.mean_ms, static_cast<double>(p.min_ms)) << p.name;
    EXPECT_EQ(p.min_ms, p.max_ms) << p.name;
  }
  const auto* person = summary.phase("person_inference");
  ASSERT_NE(person, nullptr);
  EXPECT_EQ(person->min_ms, 740);
  EXPECT_EQ(person->max_ms, 740);
  EXPECT_TRUE(summary.within_budgets());
  const auto text = bench_report(summary);
  EXPECT_NE(text.find("phase person_inference"), std::string::npos);
  EXPECT_NE(text.find("flash_pd "), std::string::npos);
  const auto csv = bench_report(summary, ReportFormat::kCsv);
  EXPECT_NE(csv.find("person_inference"), std::string::npos);
}

TEST(VirtualClockTest, OrdersByTimeThenPhase) {
  VirtualClock clock;
  std::vector<int> order;
  clock.schedule(10, Phase::kCapture, [&] { order.push_back(3); });
  clock.schedule(10, Phase::kScenario, [&] { order.push_back(1); });
  clock.schedule(5, Phase::kExpectation, [&] { order.push_back(0); });
  clock.schedule(10, Phase::kTick, [&] { order.push_back(2); });
  clock.schedule(10, Phase::kCapture, [&] { clock.schedule(10, Phase::kScenario, [&] { order.push_back(4); }); });
  clock.run_until(100);
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3, 4}));
}

}  // namespace
}  // namespace tinylift::sim
