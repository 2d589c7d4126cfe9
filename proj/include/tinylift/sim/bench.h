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
#ifndef TINYLIFT_SIM_BENCH_H_
#define TINYLIFT_SIM_BENCH_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tinylift/sim/harness.h"

namespace tinylift::sim {

struct PhaseSummary {
  std::string name;
  std::size_t count = 0;
  double mean_ms = 0;
  Millis min_ms = 0;
  Millis max_ms = 0;
};

struct BenchSummary {
  std::size_t runs = 0;
  std::vector<PhaseSummary> phases;
  std::size_t arena_peak_bytes = 0;
  std::size_t arena_capacity = 0;
  std::size_t flash_pd = 0;
  std::size_t flash_kws = 0;
  double host_person_ms = 0;   // mean per inference, wall clock
  double host_keyword_ms = 0;

  const PhaseSummary* phase(const std::string& name) const;
  bool within_budgets() const;
};

// Phases: person_inference, keyword_inference, listen_to_dispatch,
// capture_to_dispatch, listen_timeout.
BenchSummary summarize(std::span<const RunStats> runs);

enum class ReportFormat { kText, kCsv };
std::string bench_report(std::span<const RunStats> runs, ReportFormat format = ReportFormat::kText);
std::string bench_report(const BenchSummary& summary, ReportFormat format = ReportFormat::kText);

}  // namespace tinylift::sim

#endif  // TINYLIFT_SIM_BENCH_H_
