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
#include "tinylift/nn/arena.h"

#include <algorithm>
#include <cstring>
#include <numeric>

#include "tinylift/nn/kernels.h"

namespace tinylift::nn {

namespace {

std::size_t align_up(std::size_t v) {
  return (v + kTensorAlignment - 1) / kTensorAlignment * kTensorAlignment;
}

}  // namespace

ArenaPlan plan_arena(const ModelGraph& graph, std::size_t capacity) {
  ArenaPlan plan;
  const auto& layers = graph.layers();
  const auto& tensors = graph.activations();
  plan.num_steps = static_cast<int>(layers.size()) + 2;

  plan.tensor_buffer.resize(tensors.size());
  plan.buffers.push_back({0, element_count(tensors[0].shape), 0, 1});
  plan.tensor_buffer[0] = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const int step = static_cast<int>(i) + 1;
    const std::size_t in_buffer = plan.tensor_buffer[i];
    plan.buffers[in_buffer].last_step = std::max(plan.buffers[in_buffer].last_step, step);
    if (layers[i].kind == LayerKind::kReshape) {
      plan.tensor_buffer[i + 1] = in_buffer;
      plan.buffers[in_buffer].last_step = step + 1;
    } else {
      plan.tensor_buffer[i + 1] = plan.buffers.size();
      plan.buffers.push_back({0, element_count(tensors[i + 1].shape), step, step + 1});
    }
  }
  // The graph output is read back after the last layer.
  plan.buffers[plan.tensor_buffer.back()].last_step = plan.num_steps - 1;

  std::vector<std::size_t> order(plan.buffers.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (plan.buffers[a].size != plan.buffers[b].size) return plan.buffers[a].size > plan.buffers[b].size;
    return plan.buffers[a].first_step < plan.buffers[b].first_step;
  });

  std::vector<std::size_t> placed;
  for (std::size_t index : order) {
    BufferPlan& buffer = plan.buffers[index];
    std::vector<const BufferPlan*> conflicts;
    for (std::size_t other : placed) {
      if (plan.buffers[other].overlaps_in_time(buffer)) conflicts.push_back(&plan.buffers[other]);
    }
    std::sort(conflicts.begin(), conflicts.end(),
              [](const BufferPlan* a, const BufferPlan* b) { return a->offset < b->offset; });
    std::size_t offset = 0;
    for (const BufferPlan* c : conflicts) {
      if (offset + buffer.size <= c->offset) break;
      offset = std::max(offset, align_up(c->offset + c->size));
    }
    buffer.offset = offset;
    placed.push_back(index);
    plan.arena_bytes = std::max(plan.arena_bytes, offset + buffer.size);
  }

  for (int step = 0; step < plan.num_steps; ++step) {
    std::size_t live = 0;
    for (const BufferPlan& b : plan.buffers) {
      if (b.first_step <= step && step <= b.last_step) live += b.size;
    }
    plan.peak_live_bytes = std::max(plan.peak_live_bytes, live);
  }

  if (plan.arena_bytes > capacity) {
    throw NnError(NnErrc::kArenaOverflow, "model '" + graph.name() + "' needs " +
                                              std::to_string(plan.arena_bytes) + " bytes, arena has " +
                                              std::to_string(capacity));
  }
  return plan;
}

InferenceLease::InferenceLease(InferenceLease&& other) noexcept
    : arena_(std::exchange(other.arena_, nullptr)), token_(other.token_), stats_(other.stats_) {}

InferenceLease& InferenceLease::operator=(InferenceLease&& other) noexcept {
  if (this != &other) {
    release();
    arena_ = std::exchange(other.arena_, nullptr);
    token_ = other.token_;
    stats_ = other.stats_;
  }
  return *this;
}

InferenceLease::~InferenceLease() { release(); }

QuantTensor InferenceLease::run(const QuantTensor& input) {
  if (!arena_) throw NnError(NnErrc::kTenantBusy, "lease already released");
  const auto start = std::chrono::steady_clock::now();
  QuantTensor out = arena_->execute(token_, input);
  stats_.wall = std::chrono::steady_clock::now() - start;
  return out;
}

void InferenceLease::release() {
  if (arena_) {
    arena_->busy_ = false;
    arena_ = nullptr;
  }
}

Arena::Arena(std::size_t capacity) : memory_(capacity, 0) {}

ActivationToken Arena::activate(const ModelGraph& graph) {
  if (tenant_ == &graph) return {this, tenant_, generation_};
  if (busy_) {
    throw NnError(NnErrc::kTenantBusy, "'" + (tenant_ ? tenant_->name() : std::string("?")) +
                                           "' has an inference in flight");
  }
  ArenaPlan plan = plan_arena(graph, capacity());
  peak_usage_ = std::max(peak_usage_, plan.arena_bytes);
  plan_ = std::move(plan);
  tenant_ = &graph;
  ++generation_;
  return {this, tenant_, generation_};
}

void Arena::check_token(const ActivationToken& token) const {
  if (token.arena != this || token.graph == nullptr || token.graph != tenant_ ||
      token.generation != generation_) {
    throw NnError(NnErrc::kTenantBusy, "token does not hold the arena");
  }
}

InferenceLease Arena::lease(const ActivationToken& token) {
  check_token(token);
  if (busy_) throw NnError(NnErrc::kTenantBusy, "inference already in flight");
  busy_ = true;
  return InferenceLease(this, token);
}

QuantTensor Arena::execute(const ActivationToken& token, const QuantTensor& input) {
  check_token(token);
  const ModelGraph& graph = *tenant_;
  const TensorInfo& expected = graph.input();
  if (input.shape != expected.shape || !(input.params == expected.params) ||
      input.data.size() != element_count(expected.shape)) {
    throw NnError(NnErrc::kShapeMismatch, "input " + shape_to_string(input.shape) +
                                              " does not match model input " +
                                              shape_to_string(expected.shape));
  }
  const ArenaPlan& plan = *plan_;
  const auto& tensors = graph.activations();
  auto region = [&](std::size_t tensor) {
    const BufferPlan& b = plan.buffer_for(tensor);
    return std::span<int8_t>(memory_.data() + b.offset, b.size);
  };

  std::memcpy(region(0).data(), input.data.data(), input.data.size());
  for (std::size_t i = 0; i < graph.layers().size(); ++i) {
    auto in = region(i);
    run_layer(graph.layers()[i], tensors[i], std::span<const int8_t>(in), tensors[i + 1],
              region(i + 1));
  }
  auto out = region(tensors.size() - 1);
  return QuantTensor{graph.output().shape, std::vector<int8_t>(out.begin(), out.end()),
                     graph.output().params};
}

QuantTensor invoke(const ActivationToken& token, const QuantTensor& input, InvokeStats* stats) {
  if (token.arena == nullptr) throw NnError(NnErrc::kTenantBusy, "no arena");
  InferenceLease lease = token.arena->lease(token);
  QuantTensor out = lease.run(input);
  if (stats) *stats = lease.stats();
  return out;
}

}  // namespace tinylift::nn
