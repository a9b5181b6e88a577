/*
 * Copyright 2026 The sdfmeas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <sstream>

#include "sdfmeas/instrument.hpp"
#include "sdfmeas/simulator.hpp"

namespace sdfmeas {
namespace {

struct Rig {
  Platform platform = quad_core_platform();
  Mapping mapping;
  std::vector<SdfGraph> graphs;
  ProgramSet programs;
  SimulationConfig config;

  Rig() { mapping.id = "m"; }

  void actor(std::string id, Cycles cost, std::string tile) {
    if (graphs.empty()) graphs.push_back(SdfGraph{"g", {}, {}});
    graphs[0].actors.push_back({id, "", CostSpec::fixed(cost)});
    mapping.actor_to_tile[id] = std::move(tile);
  }
  void channel(std::string id, std::string src, std::string dst, std::int64_t cap = 8, std::int64_t init = 0) {
    graphs[0].channels.push_back({id, src, dst, 1, 1, init, cap, 1});
    mapping.channel_to_region[id] = "shm";
  }
  Trace run() { return simulate(platform, mapping, programs, graphs, config); }
};

const TraceRecord* find(const Trace& t, std::size_t tile, StatementKind kind) {
  for (const auto& r : t.records) {
    if (r.tile == tile && r.kind == kind) return &r;
  }
  return nullptr;
}

TEST(Simulator, SingleCompute) {
  Rig s;
  s.actor("A", 100, "P1");
  s.programs["P1"] = {ComputeStmt{"A"}};
  s.config.stop.graph_iterations = {{"g", 1}};
  auto t = s.run();
  ASSERT_EQ(t.records.size(), 1u);
  EXPECT_EQ(t.records[0].start, 0);
  EXPECT_EQ(t.records[0].end, 100);
  EXPECT_EQ(t.iterations.at("g"), 1);
  EXPECT_EQ(t.end_cycle, 100);
}

TEST(Simulator, SecondWriterFinishesOneCycleLater) {
  Rig s;
  s.platform.bus = {Arbitration::RoundRobin, 1, 1, 0};
  s.config.cost.poll_bus_words = 0;
  s.actor("A", 1, "P1");
  s.actor("B", 1, "P2");
  s.actor("C", 1, "P3");
  s.actor("D", 1, "P4");
  s.channel("ac", "A", "C", 64);
  s.channel("bd", "B", "D", 64);
  s.programs["P1"] = {WriteStmt{"ac", "A"}};
  s.programs["P2"] = {WriteStmt{"bd", "B"}};
  s.config.stop.cycle_budget = 5;
  auto t = s.run();
  const auto* w1 = find(t, 0, StatementKind::Write);
  const auto* w2 = find(t, 1, StatementKind::Write);
  ASSERT_TRUE(w1 && w2);
  EXPECT_EQ(w1->start, w2->start);
  EXPECT_EQ(w2->end, w1->end + 1);
}

TEST(Simulator, TriggersEncloseExactlyTheBlock) {
  Rig s;
  s.actor("A", 100, "P1");
  s.programs["P1"] = {StartStmt{"b", 2}, ComputeStmt{"A"}, StopStmt{"b", 2}};
  s.config.controller = ControllerConfig{1, true, 3, 16};
  s.config.measured_block = "b";
  s.config.stop.measurements = 3;
  auto t = s.run();
  ASSERT_EQ(t.timing.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(t.timing[k].duration, 100);
    EXPECT_EQ(t.timing[k].start_cycle, 2 + static_cast<Cycles>(k) * 104);
  }
}

TEST(Simulator, CircularWaitDeadlocks) {
  Rig s;
  s.actor("A", 10, "P1");
  s.actor("B", 10, "P2");
  s.channel("ab", "A", "B");
  s.channel("ba", "B", "A");
  s.programs["P1"] = {ReadStmt{"ba", "A"}, ComputeStmt{"A"}, WriteStmt{"ab", "A"}};
  s.programs["P2"] = {ReadStmt{"ab", "B"}, ComputeStmt{"B"}, WriteStmt{"ba", "B"}};
  s.config.stop.graph_iterations = {{"g", 1}};
  try {
    s.run();
    FAIL() << "expected a deadlock";
  } catch (const DeadlockError& e) {
    ASSERT_EQ(e.blocked().size(), 2u);
    EXPECT_NE(e.blocked()[0].find("read(ba) of A"), std::string::npos);
  }
}

TEST(Simulator, FullChannelWithoutConsumerDeadlocks) {
  Rig s;
  s.actor("A", 10, "P1");
  s.actor("B", 10, "P2");
  s.channel("ab", "A", "B", 2);
  s.programs["P1"] = {ComputeStmt{"A"}, WriteStmt{"ab", "A"}};
  s.config.stop.graph_iterations = {{"g", 5}};
  EXPECT_THROW(s.run(), DeadlockError);
}

TEST(Simulator, BudgetExceededWithTarget) {
  Rig s;
  s.actor("A", 100, "P1");
  s.programs["P1"] = {ComputeStmt{"A"}};
  s.config.stop.graph_iterations = {{"g", 50}};
  s.config.stop.cycle_budget = 1000;
  EXPECT_THROW(s.run(), CycleBudgetExceeded);
  s.config.stop.graph_iterations.reset();
  auto t = s.run();
  EXPECT_EQ(t.end_cycle, 1000);
  EXPECT_EQ(t.iterations.at("g"), 10);
}

Rig sobel_pipeline(CostMode mode) {
  Rig s;
  s.platform.bus = {Arbitration::RoundRobin, 4, 4, 1};
  for (auto [a, tile] : {std::pair{"getPixel", "P1"}, {"GX", "P2"}, {"GY", "P3"}, {"ABS", "P4"}}) {
    s.actor(a, 0, tile);
    s.graphs[0].actors.back().compute = {100, 300, 900, mode};
  }
  s.graphs[0].channels = {{"px_gx", "getPixel", "GX", 9, 9, 0, 18, 4},
                          {"px_gy", "getPixel", "GY", 9, 9, 0, 18, 4},
                          {"gx_abs", "GX", "ABS", 1, 1, 0, 2, 4},
                          {"gy_abs", "GY", "ABS", 1, 1, 0, 2, 4}};
  for (const auto& c : s.graphs[0].channels) s.mapping.channel_to_region[c.id] = "shm";
  for (auto [a, tile] : {std::pair{"getPixel", "P1"}, {"GX", "P2"}, {"GY", "P3"}, {"ABS", "P4"}}) {
    s.mapping.schedules.push_back({tile, {a}});
  }
  s.programs = base_programs(s.mapping, s.graphs);
  return s;
}

TEST(Simulator, HundredIterationsWithoutDeadlock) {
  auto s = sobel_pipeline(CostMode::FixedAvg);
  s.config.stop.graph_iterations = {{"g", 100}};
  auto t = s.run();
  EXPECT_GE(t.iterations.at("g"), 100);
  // Tokens in flight are bounded by the capacities.
  for (const auto& [c, n] : t.final_state.at("g").tokens) {
    EXPECT_GE(n, 0);
    EXPECT_LE(n, s.graphs[0].find_channel(c)->capacity);
  }
}

TEST(Simulator, DeterministicForSeed) {
  auto s = sobel_pipeline(CostMode::Triangular);
  s.config.stop.graph_iterations = {{"g", 20}};
  s.config.seed = 42;
  auto a = s.run();
  auto b = s.run();
  EXPECT_EQ(a.records, b.records);
  s.config.seed = 43;
  auto c = s.run();
  EXPECT_NE(a.records, c.records);
}

TEST(Simulator, TriangularCostWithinBounds) {
  auto s = sobel_pipeline(CostMode::Triangular);
  s.config.stop.graph_iterations = {{"g", 50}};
  auto t = s.run();
  for (const auto& r : t.records) {
    if (r.kind != StatementKind::Compute || r.partial) continue;
    EXPECT_GE(r.end - r.start, 100);
    EXPECT_LE(r.end - r.start, 900);
  }
}

TEST(Simulator, BusIntervalsAreDisjoint) {
  auto s = sobel_pipeline(CostMode::FixedAvg);
  s.config.stop.graph_iterations = {{"g", 10}};
  auto t = s.run();
  ASSERT_FALSE(t.bus_busy.empty());
  for (std::size_t i = 1; i < t.bus_busy.size(); ++i) EXPECT_LT(t.bus_busy[i - 1].end, t.bus_busy[i].start);
}

TEST(Simulator, PrivateChannelNeedsNoBus) {
  Rig s;
  s.actor("A", 10, "P1");
  s.actor("B", 10, "P1");
  s.channel("ab", "A", "B");
  s.mapping.channel_to_region["ab"] = s.platform.tiles[0].private_memory.id;
  s.programs["P1"] = {ComputeStmt{"A"}, WriteStmt{"ab", "A"}, ReadStmt{"ab", "B"}, ComputeStmt{"B"}};
  s.config.stop.graph_iterations = {{"g", 3}};
  auto t = s.run();
  EXPECT_TRUE(t.bus_busy.empty());
  EXPECT_EQ(t.iterations.at("g"), 3);
}

TEST(DetectDeadlock, Cases) {
  std::vector<ChannelOccupancy> ch{{0, 2}, {2, 2}};
  std::vector<TileStatus> both{{true, ChannelWait{0, true, 1}}, {true, ChannelWait{1, false, 1}}};
  EXPECT_TRUE(detect_deadlock(both, ch));
  std::vector<TileStatus> one_running{{true, ChannelWait{0, true, 1}}, {true, std::nullopt}};
  EXPECT_FALSE(detect_deadlock(one_running, ch));
  std::vector<TileStatus> idle_tile{{true, ChannelWait{0, true, 1}}, {false, std::nullopt}};
  EXPECT_TRUE(detect_deadlock(idle_tile, ch));
  std::vector<ChannelOccupancy> ready{{1, 2}, {2, 2}};
  EXPECT_FALSE(detect_deadlock(both, ready));
}

TEST(Simulator, TraceExport) {
  Rig s;
  s.actor("A", 7, "P1");
  s.programs["P1"] = {ComputeStmt{"A"}, DelayStmt{3}};
  s.config.stop.graph_iterations = {{"g", 1}};
  std::ostringstream os;
  write_trace(os, s.run());
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "tile,statement,subject,start,end");
  EXPECT_NE(os.str().find("P1,compute,A,0,7"), std::string::npos);
}

TEST(CostModel, Validation) {
  CostModel c;
  EXPECT_TRUE(validate_cost_model(c).ok());
  c.poll_interval = 0;
  EXPECT_FALSE(validate_cost_model(c).ok());
  Channel ch;
  ch.token_size = 32;
  EXPECT_EQ(transfer_cost_per_token(ch, BusSpec{Arbitration::RoundRobin, 4, 4, 1}), 128);
}

}  // namespace
}  // namespace sdfmeas
