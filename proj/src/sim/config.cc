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
#include "tinylift/sim/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace tinylift::sim {

std::string to_string(ConfigErrc code) {
  switch (code) {
    case ConfigErrc::kParseError: return "ConfigParseError";
    case ConfigErrc::kUnknownKey: return "UnknownConfigKey";
    case ConfigErrc::kBadValue: return "BadConfigValue";
    case ConfigErrc::kIo: return "IoError";
  }
  return "ConfigError";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int64_t parse_int(std::string_view key, std::string_view value) {
  int64_t out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(ConfigErrc::kBadValue, std::string(key) + " = " + std::string(value));
  }
  return out;
}

std::vector<int> parse_floors(std::string_view value) {
  if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
    value = value.substr(1, value.size() - 2);
  }
  std::vector<int> floors;
  while (!value.empty()) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) floors.push_back(static_cast<int>(parse_int("floors", item)));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return floors;
}

}  // namespace

SimConfig parse_config(std::string_view text) {
  SimConfig config;
  auto& c = config.controller;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(ConfigErrc::kParseError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key == "detect_threshold_pct") {
      c.detect_threshold_pct = static_cast<int>(parse_int(key, value));
    } else if (key == "kws_threshold_pct") {
      c.kws_threshold_pct = static_cast<int>(parse_int(key, value));
    } else if (key == "listen_timeout_ms") {
      c.listen_timeout_ms = parse_int(key, value);
    } else if (key == "camera_period_ms") {
      c.camera_period_ms = parse_int(key, value);
    } else if (key == "pd_latency_ms") {
      c.pd_latency_ms = parse_int(key, value);
    } else if (key == "kws_latency_ms") {
      c.kws_latency_ms = parse_int(key, value);
    } else if (key == "audio_window_ms") {
      c.audio_window_ms = parse_int(key, value);
    } else if (key == "floors") {
      c.floors = parse_floors(value);
    } else if (key == "arena_capacity") {
      const auto bytes = parse_int(key, value);
      if (bytes <= 0) throw ConfigError(ConfigErrc::kBadValue, "arena_capacity must be positive");
      config.arena_capacity = static_cast<std::size_t>(bytes);
    } else if (key == "window") {
      if (value == "rectangular") {
        config.window = dsp::WindowKind::kRectangular;
      } else if (value == "hann") {
        config.window = dsp::WindowKind::kHann;
      } else {
        throw ConfigError(ConfigErrc::kBadValue, "window = " + std::string(value));
      }
    } else if (key == "resize") {
      if (value == "nearest") {
        config.resize = vision::ResizeKind::kNearest;
      } else if (value == "bilinear") {
        config.resize = vision::ResizeKind::kBilinear;
      } else {
        throw ConfigError(ConfigErrc::kBadValue, "resize = " + std::string(value));
      }
    } else {
      throw ConfigError(ConfigErrc::kUnknownKey, std::string(key));
    }
  }
  try {
    c.validate();
  } catch (const controller::ControllerError& e) {
    throw ConfigError(ConfigErrc::kBadValue, e.what());
  }
  return config;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigErrc::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const SimConfig& config) {
  const auto& c = config.controller;
  std::ostringstream out;
  out << "detect_threshold_pct = " << c.detect_threshold_pct << '\n'
      << "kws_threshold_pct = " << c.kws_threshold_pct << '\n'
      << "listen_timeout_ms = " << c.listen_timeout_ms << '\n'
      << "camera_period_ms = " << c.camera_period_ms << '\n'
      << "pd_latency_ms = " << c.pd_latency_ms << '\n'
      << "kws_latency_ms = " << c.kws_latency_ms << '\n'
      << "audio_window_ms = " << c.audio_window_ms << '\n'
      << "floors = ";
  for (std::size_t i = 0; i < c.floors.size(); ++i) out << (i ? "," : "") << c.floors[i];
  out << '\n'
      << "arena_capacity = " << config.arena_capacity << '\n'
      << "window = " << (config.window == dsp::WindowKind::kHann ? "hann" : "rectangular") << '\n'
      << "resize = " << (config.resize == vision::ResizeKind::kBilinear ? "bilinear" : "nearest")
      << '\n';
  return out.str();
}

}  // namespace tinylift::sim
