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
#include "tinylift/sim/scenario.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace tinylift::sim {

std::string to_string(ScenarioErrc code) {
  switch (code) {
    case ScenarioErrc::kParseError: return "ParseError";
    case ScenarioErrc::kMissingFile: return "MissingFile";
    case ScenarioErrc::kNonMonotoneTime: return "NonMonotoneTime";
    case ScenarioErrc::kAssertionFailed: return "AssertionFailed";
  }
  return "ScenarioError";
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kCamera: return "camera";
    case EventKind::kAudio: return "audio";
    case EventKind::kExpectDispatch: return "expect_dispatch";
    case EventKind::kExpectIdle: return "expect_idle";
  }
  return "?";
}

Millis Scenario::horizon() const {
  Millis end = 0;
  for (const auto& e : events) {
    end = std::max(end, e.t_ms);
    if (e.kind == EventKind::kExpectDispatch || e.kind == EventKind::kExpectIdle) {
      end = std::max(end, e.until_ms);
    }
  }
  return end;
}

std::vector<int> Scenario::units() const {
  std::set<int> ids;
  for (const auto& e : events) ids.insert(e.unit);
  return {ids.begin(), ids.end()};
}

namespace {

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw ScenarioError(ScenarioErrc::kParseError, "line " + std::to_string(line) + ": " + what);
}

int64_t to_int(std::string_view s, int line, const char* what) {
  int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || v < 0) {
    parse_error(line, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::string& base_dir, bool check_files) {
  namespace fs = std::filesystem;
  Scenario scenario;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(w);
    if (tokens.empty()) continue;

    ScenarioEvent event;
    event.line = line_no;
    std::vector<std::string> args;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      if (tokens[i].rfind("unit=", 0) == 0) {
        const auto id = to_int(std::string_view(tokens[i]).substr(5), line_no, "unit");
        if (id > 255) parse_error(line_no, "unit id out of range");
        event.unit = static_cast<int>(id);
      } else {
        args.push_back(tokens[i]);
      }
    }
    if (tokens.size() < 2) parse_error(line_no, "missing event kind");
    event.t_ms = to_int(tokens[0], line_no, "time");
    const std::string& kind = tokens[1];

    auto expect_args = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi) {
        parse_error(line_no, kind + " takes " + std::to_string(lo) +
                                 (lo == hi ? "" : ".." + std::to_string(hi)) + " arguments");
      }
    };
    auto resolve = [&](const std::string& p) {
      const fs::path path(p);
      const fs::path full = path.is_absolute() ? path : fs::path(base_dir) / path;
      if (check_files && !fs::is_regular_file(full)) {
        throw ScenarioError(ScenarioErrc::kMissingFile,
                            "line " + std::to_string(line_no) + ": " + full.string());
      }
      return full.lexically_normal().string();
    };

    if (kind == "camera") {
      expect_args(1, 1);
      event.kind = EventKind::kCamera;
      event.path = resolve(args[0]);
    } else if (kind == "audio") {
      expect_args(1, 2);
      event.kind = EventKind::kAudio;
      event.path = resolve(args[0]);
      if (args.size() == 2) event.offset_ms = to_int(args[1], line_no, "offset");
    } else if (kind == "expect_dispatch") {
      expect_args(2, 2);
      event.kind = EventKind::kExpectDispatch;
      event.floor = static_cast<int>(to_int(args[0], line_no, "floor"));
      event.until_ms = to_int(args[1], line_no, "by_ms");
      if (event.until_ms < event.t_ms) parse_error(line_no, "by_ms earlier than event time");
    } else if (kind == "expect_idle") {
      expect_args(0, 1);
      event.kind = EventKind::kExpectIdle;
      event.until_ms = args.empty() ? event.t_ms : to_int(args[0], line_no, "at_ms");
      if (event.until_ms < event.t_ms) parse_error(line_no, "at_ms earlier than event time");
    } else {
      parse_error(line_no, "unknown event kind '" + kind + "'");
    }

    if (!scenario.events.empty() && event.t_ms < scenario.events.back().t_ms) {
      throw ScenarioError(ScenarioErrc::kNonMonotoneTime,
                          "line " + std::to_string(line_no) + ": t=" + std::to_string(event.t_ms) +
                              " after t=" + std::to_string(scenario.events.back().t_ms));
    }
    scenario.events.push_back(std::move(event));
  }
  return scenario;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(ScenarioErrc::kMissingFile, path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_scenario(ss.str(), dir.empty() ? "." : dir.string());
}

std::string format_scenario(const Scenario& scenario) {
  std::ostringstream out;
  for (const auto& e : scenario.events) {
    out << e.t_ms << ' ' << to_string(e.kind);
    switch (e.kind) {
      case EventKind::kCamera: out << ' ' << e.path; break;
      case EventKind::kAudio:
        out << ' ' << e.path;
        if (e.offset_ms) out << ' ' << e.offset_ms;
        break;
      case EventKind::kExpectDispatch: out << ' ' << e.floor << ' ' << e.until_ms; break;
      case EventKind::kExpectIdle: out << ' ' << e.until_ms; break;
    }
    if (e.unit) out << " unit=" << e.unit;
    out << '\n';
  }
  return out.str();
}

}  // namespace tinylift::sim
