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
#include "tinylift/sim/bench.h"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "tinylift/nn/model.h"

namespace tinylift::sim {

const PhaseSummary* BenchSummary::phase(const std::string& name) const {
  for (const auto& p : phases) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

bool BenchSummary::within_budgets() const {
  return flash_pd <= nn::kFlashBudgetBytes && flash_kws <= nn::kFlashBudgetBytes &&
         arena_peak_bytes <= arena_capacity;
}

namespace {

PhaseSummary summarize_phase(std::string name, const std::vector<Millis>& samples) {
  PhaseSummary p;
  p.name = std::move(name);
  p.count = samples.size();
  if (samples.empty()) return p;
  double sum = 0;
  p.min_ms = std::numeric_limits<Millis>::max();
  p.max_ms = std::numeric_limits<Millis>::min();
  for (Millis v : samples) {
    sum += static_cast<double>(v);
    p.min_ms = std::min(p.min_ms, v);
    p.max_ms = std::max(p.max_ms, v);
  }
  p.mean_ms = sum / static_cast<double>(samples.size());
  return p;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

BenchSummary summarize(std::span<const RunStats> runs) {
  BenchSummary s;
  s.runs = runs.size();
  std::vector<Millis> person, keyword, to_dispatch, end_to_end, timeouts;
  double person_wall = 0;
  double keyword_wall = 0;
  for (const auto& r : runs) {
    person.insert(person.end(), r.person_latency_ms.begin(), r.person_latency_ms.end());
    keyword.insert(keyword.end(), r.keyword_latency_ms.begin(), r.keyword_latency_ms.end());
    for (const auto& d : r.dispatches) {
      to_dispatch.push_back(d.t_ms - d.listen_started_ms);
      end_to_end.push_back(d.t_ms - d.capture_ms);
    }
    for (const auto& l : r.listens) {
      if (!l.dispatched && l.ended_ms > l.started_ms) timeouts.push_back(l.ended_ms - l.started_ms);
    }
    s.arena_peak_bytes = std::max(s.arena_peak_bytes, r.arena_peak_bytes);
    s.arena_capacity = std::max(s.arena_capacity, r.arena_capacity);
    s.flash_pd = std::max(s.flash_pd, r.person_flash_bytes);
    s.flash_kws = std::max(s.flash_kws, r.keyword_flash_bytes);
    person_wall += std::chrono::duration<double, std::milli>(r.person_wall).count();
    keyword_wall += std::chrono::duration<double, std::milli>(r.keyword_wall).count();
  }
  if (!person.empty()) s.host_person_ms = person_wall / static_cast<double>(person.size());
  if (!keyword.empty()) s.host_keyword_ms = keyword_wall / static_cast<double>(keyword.size());
  s.phases.push_back(summarize_phase("person_inference", person));
  s.phases.push_back(summarize_phase("keyword_inference", keyword));
  s.phases.push_back(summarize_phase("listen_to_dispatch", to_dispatch));
  s.phases.push_back(summarize_phase("capture_to_dispatch", end_to_end));
  s.phases.push_back(summarize_phase("listen_timeout", timeouts));
  return s;
}

std::string bench_report(std::span<const RunStats> runs, ReportFormat format) {
  return bench_report(summarize(runs), format);
}

std::string bench_report(const BenchSummary& s, ReportFormat format) {
  const auto budget = std::to_string(nn::kFlashBudgetBytes);
  std::string out;
  if (format == ReportFormat::kCsv) {
    out += "metric,count,mean_ms,min_ms,max_ms\n";
    for (const auto& p : s.phases) {
      out += p.name + "," + std::to_string(p.count) + ",";
      if (p.count) {
        out += fmt("%.3f", p.mean_ms) + "," + std::to_string(p.min_ms) + "," + std::to_string(p.max_ms);
      } else {
        out += ",,";
      }
      out += "\n";
    }
    out += "metric,value,limit,verdict\n";
    out += "arena_peak_bytes," + std::to_string(s.arena_peak_bytes) + "," +
           std::to_string(s.arena_capacity) + "," + verdict(s.arena_peak_bytes <= s.arena_capacity) + "\n";
    out += "flash_pd," + std::to_string(s.flash_pd) + "," + budget + "," +
           verdict(s.flash_pd <= nn::kFlashBudgetBytes) + "\n";
    out += "flash_kws," + std::to_string(s.flash_kws) + "," + budget + "," +
           verdict(s.flash_kws <= nn::kFlashBudgetBytes) + "\n";
    return out;
  }
  out += "runs " + std::to_string(s.runs) + "\n";
  for (const auto& p : s.phases) {
    out += "phase " + p.name + " n=" + std::to_string(p.count);
    if (p.count) {
      out += " mean_ms=" + fmt("%.3f", p.mean_ms) + " min_ms=" + std::to_string(p.min_ms) +
             " max_ms=" + std::to_string(p.max_ms);
    }
    out += "\n";
  }
  out += "arena_peak_bytes " + std::to_string(s.arena_peak_bytes) + " <= " +
         std::to_string(s.arena_capacity) + " " + verdict(s.arena_peak_bytes <= s.arena_capacity) + "\n";
  out += "flash_pd " + std::to_string(s.flash_pd) + " <= " + budget + " " +
         verdict(s.flash_pd <= nn::kFlashBudgetBytes) + "\n";
  out += "flash_kws " + std::to_string(s.flash_kws) + " <= " + budget + " " +
         verdict(s.flash_kws <= nn::kFlashBudgetBytes) + "\n";
  out += "host_person_ms " + fmt("%.3f", s.host_person_ms) + "\n";
  out += "host_keyword_ms " + fmt("%.3f", s.host_keyword_ms) + "\n";
  return out;
}

}  // namespace tinylift::sim
