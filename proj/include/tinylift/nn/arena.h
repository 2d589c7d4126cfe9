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
#ifndef TINYLIFT_NN_ARENA_H_
#define TINYLIFT_NN_ARENA_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tinylift/nn/model.h"
#include "tinylift/nn/quant.h"

namespace tinylift::nn {

inline constexpr std::size_t kTensorAlignment = 4;

// One arena region. Buffer lifetimes are expressed in execution steps: the
// graph input is written at step 0 and layer i runs at step i + 1. The graph
// output stays live through step num_layers + 1.
struct BufferPlan {
  std::size_t offset = 0;
  std::size_t size = 0;
  int first_step = 0;
  int last_step = 0;

  bool overlaps_in_time(const BufferPlan& other) const {
    return first_step <= other.last_step && other.first_step <= last_step;
  }
  bool overlaps_in_memory(const BufferPlan& other) const {
    return offset < other.offset + other.size && other.offset < offset + size;
  }
};

struct ArenaPlan {
  std::vector<BufferPlan> buffers;
  // Activation tensor index -> buffer index. Reshape outputs share a buffer
  // with their input.
  std::vector<std::size_t> tensor_buffer;
  std::size_t peak_live_bytes = 0;  // max bytes simultaneously live
  std::size_t arena_bytes = 0;      // end of the highest placed buffer
  int num_steps = 0;

  const BufferPlan& buffer_for(std::size_t tensor) const { return buffers[tensor_buffer[tensor]]; }
};

// Greedy first-fit by descending size. Throws kArenaOverflow when the packed
// layout does not fit in `capacity`.
ArenaPlan plan_arena(const ModelGraph& graph, std::size_t capacity = kDefaultArenaBytes);

class Arena;

// Proof that a graph was installed in an arena. Goes stale when another
// tenant is activated.
struct ActivationToken {
  Arena* arena = nullptr;
  const ModelGraph* graph = nullptr;
  uint64_t generation = 0;
};

struct InvokeStats {
  std::chrono::nanoseconds wall{0};
};

// Holds the arena busy from creation until release() or destruction. The
// simulator keeps a lease open for the modelled inference latency.
class InferenceLease {
 public:
  InferenceLease() = default;
  InferenceLease(InferenceLease&& other) noexcept;
  InferenceLease& operator=(InferenceLease&& other) noexcept;
  InferenceLease(const InferenceLease&) = delete;
  InferenceLease& operator=(const InferenceLease&) = delete;
  ~InferenceLease();

  QuantTensor run(const QuantTensor& input);
  void release();
  bool active() const { return arena_ != nullptr; }
  const InvokeStats& stats() const { return stats_; }

 private:
  friend class Arena;
  InferenceLease(Arena* arena, ActivationToken token) : arena_(arena), token_(token) {}

  Arena* arena_ = nullptr;
  ActivationToken token_;
  InvokeStats stats_;
};

// Single shared activation memory. At most one tenant graph is installed at a
// time and all calls on one arena must be serialized by the caller.
class Arena {
 public:
  explicit Arena(std::size_t capacity = kDefaultArenaBytes);
  Arena(const Arena&) = delete;
  Arena& operator=(const Arena&) = delete;

  // Installs `graph` as the tenant, replacing the previous plan. Re-activating
  // the current tenant is a no-op. Throws kTenantBusy while a lease on a
  // different tenant is outstanding, kArenaOverflow if the plan does not fit.
  ActivationToken activate(const ModelGraph& graph);

  InferenceLease lease(const ActivationToken& token);

  std::size_t capacity() const { return memory_.size(); }
  const ModelGraph* active_tenant() const { return tenant_; }
  const ArenaPlan* plan() const { return plan_ ? &*plan_ : nullptr; }
  bool busy() const { return busy_; }
  std::size_t peak_usage() const { return peak_usage_; }
  uint64_t generation() const { return generation_; }

 private:
  friend class InferenceLease;
  void check_token(const ActivationToken& token) const;
  QuantTensor execute(const ActivationToken& token, const QuantTensor& input);

  std::vector<int8_t> memory_;
  const ModelGraph* tenant_ = nullptr;
  std::optional<ArenaPlan> plan_;
  uint64_t generation_ = 0;
  bool busy_ = false;
  std::size_t peak_usage_ = 0;
};

// Runs the tenant graph on `input` inside its arena and returns the output
// scores. Equivalent to lease(token).run(input).
QuantTensor invoke(const ActivationToken& token, const QuantTensor& input,
                   InvokeStats* stats = nullptr);

}  // namespace tinylift::nn

#endif  // TINYLIFT_NN_ARENA_H_
