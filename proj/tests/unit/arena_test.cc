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
#include <vector>

#include <gtest/gtest.h>

#include "generators.h"
#include "oracles.h"
#include "tinylift/nn/arena.h"
#include "tinylift/nn/builder.h"
#include "tinylift/nn/kernels.h"
#include "tinylift/sim/fixtures.h"

namespace tinylift::nn {
namespace {

using testing::Rng;

// Chain of fully connected layers with the given widths and a Softmax head.
ModelGraph fc_chain(const std::vector<int>& widths, uint64_t seed) {
  Rng rng(seed);
  const TensorInfo in{{1, widths[0]}, choose_params(-1, 1)};
  GraphBuilder b("chain", in, testing::random_reals(rng, widths[0], 1.0));
  for (std::size_t i = 1; i < widths.size(); ++i) {
    const int n = widths[i - 1], m = widths[i];
    b.fully_connected({m, n}, testing::random_reals(rng, static_cast<std::size_t>(m * n), 0.5),
                      testing::random_reals(rng, m, 0.1), Activation::kNone);
  }
  b.softmax();
  return b.build();
}

TEST(PlanArena, SingleFullyConnected) {
  const auto g = fc_chain({4, 2}, 1);
  const auto plan = plan_arena(g);
  EXPECT_GE(plan.peak_live_bytes, 6u);
  const auto& in = plan.buffer_for(0);
  const auto& out = plan.buffer_for(1);
  EXPECT_TRUE(in.overlaps_in_time(out));
  EXPECT_FALSE(in.overlaps_in_memory(out));
  EXPECT_TRUE(testing::check_plan(g, plan).empty());
}

TEST(PlanArena, DeadTensorsMayAlias) {
  const auto g = fc_chain({8, 6, 4}, 2);
  const auto plan = plan_arena(g);
  // Tensors A(8) -> B(6) -> C(4), then the 4-byte Softmax output.
  EXPECT_EQ(plan.peak_live_bytes, std::max<std::size_t>({8 + 6, 6 + 4, 4 + 4}));
  EXPECT_EQ(plan.peak_live_bytes, testing::brute_force_peak(g));
  EXPECT_TRUE(testing::check_plan(g, plan).empty());
  // A is dead once B exists, so C fits in A's slot.
  EXPECT_EQ(plan.buffer_for(2).offset, plan.buffer_for(0).offset);
}

TEST(PlanArena, RandomGraphsAreSound) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto c = testing::random_float_graph(rng, i);
    const auto plan = plan_arena(c.graph);
    const auto bad = testing::check_plan(c.graph, plan);
    ASSERT_TRUE(bad.empty()) << "graph " << i << ": " << bad.front();
    EXPECT_EQ(plan.peak_live_bytes, testing::brute_force_peak(c.graph));
    EXPECT_GE(plan.arena_bytes, plan.peak_live_bytes);
  }
  for (int i = 0; i < 100; ++i) {
    std::vector<int> widths(static_cast<std::size_t>(rng.range(2, 7)));
    for (int& w : widths) w = static_cast<int>(rng.range(1, 40));
    const auto g = fc_chain(widths, rng.next());
    const auto plan = plan_arena(g);
    ASSERT_TRUE(testing::check_plan(g, plan).empty());
    EXPECT_EQ(plan.peak_live_bytes, testing::brute_force_peak(g));
  }
}

TEST(PlanArena, ReferenceModelsFitBudget) {
  for (const auto& g : {make_person_reference_model(), make_kws_reference_model(), sim::make_stub_person_model(),
                        sim::make_stub_kws_model()}) {
    const auto plan = plan_arena(g);
    EXPECT_TRUE(testing::check_plan(g, plan).empty()) << g.name();
    EXPECT_LE(plan.arena_bytes, kDefaultArenaBytes) << g.name();
    EXPECT_EQ(plan.peak_live_bytes, testing::brute_force_peak(g)) << g.name();
  }
}

TEST(PlanArena, Overflow) {
  const auto g = fc_chain({64, 64}, 4);
  try {
    plan_arena(g, 100);
    FAIL();
  } catch (const NnError& e) {
    EXPECT_EQ(e.code(), NnErrc::kArenaOverflow);
  }
  EXPECT_NO_THROW(plan_arena(g, 128));
}

TEST(Arena, TenantSwitchingAfterInference) {
  const auto person = sim::make_stub_person_model();
  const auto kws = sim::make_stub_kws_model();
  Arena arena;
  const auto tp = arena.activate(person);
  EXPECT_EQ(arena.active_tenant(), &person);
  const auto before = arena.plan()->arena_bytes;
  {
    auto lease = arena.lease(tp);
    lease.run(QuantTensor{person.input().shape, std::vector<int8_t>(element_count(person.input().shape), 0),
                          person.input().params});
  }
  const auto tk = arena.activate(kws);
  EXPECT_EQ(arena.active_tenant(), &kws);
  EXPECT_NE(arena.plan()->arena_bytes, before);
  EXPECT_NE(tk.generation, tp.generation);
}

TEST(Arena, BusyWhileInferenceInFlight) {
  const auto person = sim::make_stub_person_model();
  const auto kws = sim::make_stub_kws_model();
  Arena arena;
  const auto tp = arena.activate(person);
  auto lease = arena.lease(tp);
  EXPECT_TRUE(arena.busy());
  try {
    arena.activate(kws);
    FAIL();
  } catch (const NnError& e) {
    EXPECT_EQ(e.code(), NnErrc::kTenantBusy);
  }
  EXPECT_THROW(arena.lease(tp), NnError);
  EXPECT_EQ(arena.active_tenant(), &person);
  lease.release();
  EXPECT_FALSE(arena.busy());
  EXPECT_NO_THROW(arena.activate(kws));
}

TEST(Arena, ReactivationIsNoOp) {
  const auto person = sim::make_stub_person_model();
  Arena arena;
  const auto a = arena.activate(person);
  const auto b = arena.activate(person);
  EXPECT_EQ(a.generation, b.generation);
  EXPECT_EQ(arena.generation(), a.generation);
}

TEST(Arena, StaleTokenRejected) {
  const auto person = sim::make_stub_person_model();
  const auto kws = sim::make_stub_kws_model();
  Arena arena;
  const auto tp = arena.activate(person);
  arena.activate(kws);
  const QuantTensor x{person.input().shape, std::vector<int8_t>(element_count(person.input().shape), 0),
                      person.input().params};
  EXPECT_THROW(invoke(tp, x), NnError);
}

TEST(Invoke, DeterministicAcrossRepeats) {
  const auto g = fc_chain({4, 2}, 5);
  Arena arena(1024);
  const auto token = arena.activate(g);
  const QuantTensor x{{1, 4}, {12, -7, 100, -128}, g.input().params};
  const auto first = invoke(token, x);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(invoke(token, x).data, first.data);
}

TEST(Invoke, MatchesLayerByLayerKernels) {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto c = testing::random_float_graph(rng, i);
    QuantTensor x{c.graph.input().shape, testing::random_int8(rng, element_count(c.graph.input().shape)),
                  c.graph.input().params};
    QuantTensor expect = x;
    for (const auto& layer : c.graph.layers()) expect = apply_layer(expect, layer);
    Arena arena;
    const auto out = invoke(arena.activate(c.graph), x);
    ASSERT_EQ(out.data, expect.data) << "graph " << i;
    EXPECT_EQ(out.shape, expect.shape);
    EXPECT_LE(arena.peak_usage(), arena.plan()->arena_bytes);
  }
}

TEST(Invoke, PersonShapedGraph) {
  const auto g = make_person_reference_model(7);
  Rng rng(7);
  Arena arena;
  const QuantTensor x{{1, 96, 96, 1}, testing::random_int8(rng, 96 * 96), g.input().params};
  const auto y = invoke(arena.activate(g), x);
  EXPECT_EQ(y.shape, (Shape{1, 2}));
  EXPECT_EQ(y.data.size(), 2u);
}

TEST(Invoke, WrongInputShape) {
  const auto g = fc_chain({4, 2}, 8);
  Arena arena(1024);
  const QuantTensor x{{1, 5}, std::vector<int8_t>(5, 0), g.input().params};
  try {
    invoke(arena.activate(g), x);
    FAIL();
  } catch (const NnError& e) {
    EXPECT_EQ(e.code(), NnErrc::kShapeMismatch);
  }
  EXPECT_FALSE(arena.busy());
}

}  // namespace
}  // namespace tinylift::nn
