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
 * @file instrument.hpp
 * @brief Statement programs, fencepost placement and measurement scenarios.
 *
 * Each tile runs its static-order schedule as a cyclic list of statements.
 * Instrumentation places Delay fenceposts (control_cost cycles each) around
 * measurable blocks; neighbouring blocks share a fencepost. Per actor
 * occurrence the four possible fencepost slots are
 *
 *   [p0] Read* [p1] Compute [p2] Write* [p3]
 *
 *   Phase  : p0 p1 p2 p3
 *   Actor  : p0 p3
 *   Sdfg   : p0 on source actors, p3 on sink actors
 *   System : none
 *
 * A scenario rewrites the fenceposts of one block into Start/Stop; the
 * deployment program turns those back into Nop of the same length, so every
 * scenario and the deployed code share one timing behaviour.
 */

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sdfmeas/mapping.hpp"
#include "sdfmeas/measctrl.hpp"
#include "sdfmeas/sdf.hpp"

namespace sdfmeas {

enum class Granularity { System, Sdfg, Actor, Phase };

std::string_view to_string(Granularity g);
Granularity parse_granularity(std::string_view text);

enum class ActorPhase { Read, Compute, Write };

std::string_view to_string(ActorPhase p);

struct ReadStmt {
  std::string channel;
  std::string actor;
  bool operator==(const ReadStmt&) const = default;
};
struct ComputeStmt {
  std::string actor;
  bool operator==(const ComputeStmt&) const = default;
};
struct WriteStmt {
  std::string channel;
  std::string actor;
  bool operator==(const WriteStmt&) const = default;
};
struct DelayStmt {
  Cycles cycles = 0;
  bool operator==(const DelayStmt&) const = default;
};
struct StartStmt {
  std::string block;
  Cycles cycles = 0;
  bool operator==(const StartStmt&) const = default;
};
struct StopStmt {
  std::string block;
  Cycles cycles = 0;
  bool operator==(const StopStmt&) const = default;
};
struct NopStmt {
  Cycles cycles = 0;
  bool operator==(const NopStmt&) const = default;
};

using Statement =
    std::variant<ReadStmt, ComputeStmt, WriteStmt, DelayStmt, StartStmt, StopStmt, NopStmt>;
using TileProgram = std::vector<Statement>;
/// tile id -> cyclic statement list
using ProgramSet = std::map<std::string, TileProgram, std::less<>>;

std::string describe(const Statement& s);

/// Fencepost positions of one actor occurrence; npos where the granularity
/// places none.
struct Occurrence {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::string tile;
  std::string graph;
  std::string actor;
  std::size_t before_read = npos;
  std::size_t before_compute = npos;
  std::size_t before_write = npos;
  std::size_t after_write = npos;
  bool has_reads = false;
  bool has_writes = false;
};

struct InstrumentedProgram {
  ProgramSet programs;
  Granularity granularity = Granularity::Phase;
  Cycles control_cost = 2;
  std::vector<Occurrence> occurrences;  // in tile, schedule order
};

enum class BlockKind { Phase, Actor, Sdfg, System };

struct Fencepost {
  std::string tile;
  std::size_t position = 0;
  bool operator==(const Fencepost&) const = default;
  auto operator<=>(const Fencepost&) const = default;
};

struct MeasurableBlock {
  std::string id;
  BlockKind kind = BlockKind::Phase;
  std::string graph;
  std::string actor;  // empty for Sdfg/System
  std::optional<ActorPhase> phase;
  std::vector<Fencepost> starts;
  std::vector<Fencepost> stops;
  int required_stop_count = 1;
};

struct MeasurementScenario {
  std::string id;
  MeasurableBlock target;
  ProgramSet programs;
  ControllerConfig controller;
  Cycles control_cost = 2;
};

/// Uninstrumented programs: Read*, Compute, Write* per scheduled actor.
ProgramSet base_programs(const Mapping& m, std::span<const SdfGraph> graphs);

InstrumentedProgram annotate(const Mapping& m, std::span<const SdfGraph> graphs, Granularity g,
                             Cycles control_cost = 2);

/// Blocks measurable at `level`; the program must be annotated at `level` or
/// finer (a Phase program supports every level).
std::vector<MeasurableBlock> measurable_blocks(const InstrumentedProgram& ip,
                                               std::span<const SdfGraph> graphs,
                                               Granularity level);

std::vector<MeasurementScenario> enumerate_scenarios(const InstrumentedProgram& ip,
                                                     std::span<const SdfGraph> graphs,
                                                     const Mapping& m,
                                                     std::optional<Granularity> level = {},
                                                     int num_measurements = 1);

/// Start/Stop -> Nop(control_cost).
ProgramSet neutralize(const MeasurementScenario& s);
ProgramSet neutralize(const ProgramSet& programs, Cycles control_cost);

/// Cycles added to one actor firing by the fenceposts of `g`.
Cycles added_cycles(Granularity g, Cycles control_cost);

/// Percentage execution-time increase of an actor of `actor_cycles`.
double invasiveness(Cycles actor_cycles, Granularity g, Cycles control_cost = 2);

/// One line per scenario: id,kind,graph,actor,phase,required_stops.
void write_scenario_manifest(std::ostream& os, std::span<const MeasurementScenario> scenarios);

}  // namespace sdfmeas
