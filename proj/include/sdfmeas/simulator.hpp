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

/**
 * @file simulator.hpp
 * @brief Cycle-level discrete-event execution of tile statement programs.
 *
 * Every tile runs its program cyclically. Time advances from event to event
 * with cycle resolution:
 *
 *  - Compute, Delay and Nop occupy the tile only.
 *  - Read/Write on a shared channel first polls the FIFO state over the bus
 *    (poll_bus_words words). While the condition is false the tile waits
 *    poll_interval cycles and polls again. Once it holds, the token payload
 *    (rate x token_size words) is transferred in grants of words_per_grant
 *    words, re-arbitrated between grants. Tokens appear (write) or free their
 *    slots (read) when the transfer completes.
 *  - Channels in a private region are polled and copied locally, without bus
 *    traffic, at cycles_per_word per word.
 *  - Start asserts its trigger when it retires and Stop when it issues; both
 *    last control_cost cycles. The controller therefore sees exactly the
 *    code enclosed by the pair. Trigger links are exclusive per tile.
 *
 * Within one cycle: bus completions first, then tiles in platform order,
 * then arbitration. Triggers of the same cycle reach the controller ordered
 * by tile index.
 */

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdfmeas/instrument.hpp"
#include "sdfmeas/mapping.hpp"
#include "sdfmeas/measctrl.hpp"
#include "sdfmeas/platform.hpp"
#include "sdfmeas/sdf.hpp"

namespace sdfmeas {

struct CostModel {
  Cycles poll_interval = 10;
  std::int64_t poll_bus_words = 1;
  /// Local (non-bus) cycles per token moved, e.g. FIFO bookkeeping.
  Cycles read_overhead_per_token = 0;
  Cycles write_overhead_per_token = 0;

  bool operator==(const CostModel&) const = default;
};

ValidationReport validate_cost_model(const CostModel& c);

/// Bus cycles to move one token of `channel`, excluding arbitration waits.
Cycles transfer_cost_per_token(const Channel& channel, const BusSpec& bus);

enum class StatementKind { Read, Compute, Write, Delay, Start, Stop, Nop };

std::string_view to_string(StatementKind k);

struct TraceRecord {
  std::size_t tile = 0;
  std::size_t position = 0;  // index in the tile program
  StatementKind kind = StatementKind::Delay;
  std::string subject;  // channel, actor or block id
  Cycles start = 0;
  Cycles end = 0;
  bool partial = false;  // still executing when the run stopped; end = end_cycle

  bool operator==(const TraceRecord&) const = default;
};

enum class TriggerKind { Start, Stop };

struct TriggerEvent {
  TriggerKind kind = TriggerKind::Start;
  std::string block;
  std::size_t tile = 0;
  Cycles cycle = 0;

  bool operator==(const TriggerEvent&) const = default;
};

struct Interval {
  Cycles start = 0;
  Cycles end = 0;  // exclusive
  bool operator==(const Interval&) const = default;
};

struct StopCondition {
  /// Stop once this graph completed the given number of iterations.
  std::optional<std::pair<std::string, std::int64_t>> graph_iterations;
  /// Stop once the controller recorded this many measurements (or is Done).
  std::optional<std::int64_t> measurements;
  /// Hard limit. Reaching it is an error only when another condition is set.
  Cycles cycle_budget = 2'000'000'000;
};

struct SimulationConfig {
  CostModel cost;
  std::uint64_t seed = 1;
  StopCondition stop;
  std::optional<ControllerConfig> controller;
  std::string measured_block;
  bool record_statements = true;
};

struct Trace {
  std::vector<std::string> tile_ids;
  std::vector<TraceRecord> records;
  std::vector<TriggerEvent> triggers;
  std::vector<TimingRecord> timing;
  std::vector<Interval> bus_busy;  // merged
  std::map<std::string, TokenState, std::less<>> final_state;  // per graph
  std::map<std::string, std::int64_t, std::less<>> iterations;  // per graph
  std::size_t overflow_count = 0;
  std::size_t stray_stops = 0;
  std::size_t ignored_starts = 0;
  Cycles end_cycle = 0;
};

Trace simulate(const Platform& platform, const Mapping& mapping, const ProgramSet& programs,
               std::span<const SdfGraph> graphs, const SimulationConfig& config);

/// What a tile waits for when it is stuck polling.
struct ChannelWait {
  std::size_t channel = 0;
  bool is_read = true;
  std::int64_t amount = 0;  // tokens (read) or free slots (write) needed
};

struct TileStatus {
  bool has_program = false;
  std::optional<ChannelWait> wait;  // set only while polling
};

struct ChannelOccupancy {
  std::int64_t tokens = 0;
  std::int64_t capacity = 0;
};

/// True iff every tile with a program is polling on a condition that the
/// current occupancy cannot satisfy. With no tile transferring or computing,
/// nothing can change the channels any more.
bool detect_deadlock(std::span<const TileStatus> tiles, std::span<const ChannelOccupancy> channels);

/// Line-delimited export: tile,statement,subject,start,end
void write_trace(std::ostream& os, const Trace& trace);

}  // namespace sdfmeas
