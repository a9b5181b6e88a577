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

#include "sdfmeas/instrument.hpp"

#include <algorithm>
#include <ostream>
#include <set>

namespace sdfmeas {

std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::System: return "system";
    case Granularity::Sdfg: return "sdfg";
    case Granularity::Actor: return "actor";
    case Granularity::Phase: return "phase";
  }
  return "?";
}

Granularity parse_granularity(std::string_view text) {
  if (text == "system") return Granularity::System;
  if (text == "sdfg") return Granularity::Sdfg;
  if (text == "actor") return Granularity::Actor;
  if (text == "phase") return Granularity::Phase;
  throw ParseError("unknown granularity '" + std::string(text) + "'");
}

std::string_view to_string(ActorPhase p) {
  switch (p) {
    case ActorPhase::Read: return "read";
    case ActorPhase::Compute: return "compute";
    case ActorPhase::Write: return "write";
  }
  return "?";
}

std::string describe(const Statement& s) {
  struct {
    std::string operator()(const ReadStmt& r) const { return "Read(" + r.channel + ") of " + r.actor; }
    std::string operator()(const ComputeStmt& c) const { return "Compute(" + c.actor + ")"; }
    std::string operator()(const WriteStmt& w) const { return "Write(" + w.channel + ") of " + w.actor; }
    std::string operator()(const DelayStmt& d) const { return "Delay(" + std::to_string(d.cycles) + ")"; }
    std::string operator()(const StartStmt& s) const { return "Start(" + s.block + ")"; }
    std::string operator()(const StopStmt& s) const { return "Stop(" + s.block + ")"; }
    std::string operator()(const NopStmt& n) const { return "Nop(" + std::to_string(n.cycles) + ")"; }
  } visitor;
  return std::visit(visitor, s);
}

namespace {

struct ActorRef {
  const SdfGraph* graph;
  const Actor* actor;
};

std::map<std::string_view, ActorRef> index_actors(std::span<const SdfGraph> graphs) {
  std::map<std::string_view, ActorRef> out;
  for (const auto& g : graphs) {
    for (const auto& a : g.actors) out[a.id] = {&g, &a};
  }
  return out;
}

const ActorRef& lookup(const std::map<std::string_view, ActorRef>& actors, const std::string& id) {
  auto it = actors.find(id);
  if (it == actors.end()) throw UnknownActor("scheduled actor '" + id + "' is not in any graph");
  return it->second;
}

bool wants(Granularity g, ActorPhase slot_before, bool source, bool sink, bool after_write) {
  switch (g) {
    case Granularity::Phase: return true;
    case Granularity::Actor: return slot_before == ActorPhase::Read || after_write;
    case Granularity::Sdfg:
      return (slot_before == ActorPhase::Read && !after_write && source) || (after_write && sink);
    case Granularity::System: return false;
  }
  return false;
}

}  // namespace

ProgramSet base_programs(const Mapping& m, std::span<const SdfGraph> graphs) {
  return annotate(m, graphs, Granularity::System).programs;
}

InstrumentedProgram annotate(const Mapping& m, std::span<const SdfGraph> graphs, Granularity g,
                             Cycles control_cost) {
  const auto actors = index_actors(graphs);
  InstrumentedProgram ip;
  ip.granularity = g;
  ip.control_cost = control_cost;

  for (const auto& sched : m.schedules) {
    auto& prog = ip.programs[sched.tile_id];
    for (const auto& actor_id : sched.order) {
      const auto& ref = lookup(actors, actor_id);
      const bool source = ref.graph->is_source(actor_id);
      const bool sink = ref.graph->is_sink(actor_id);
      Occurrence occ;
      occ.tile = sched.tile_id;
      occ.graph = ref.graph->id;
      occ.actor = actor_id;

      auto fencepost = [&](ActorPhase before, bool after_write) -> std::size_t {
        if (!wants(g, before, source, sink, after_write)) return Occurrence::npos;
        prog.push_back(DelayStmt{control_cost});
        return prog.size() - 1;
      };

      occ.before_read = fencepost(ActorPhase::Read, false);
      for (const auto* c : ref.graph->inputs_of(actor_id)) {
        prog.push_back(ReadStmt{c->id, actor_id});
        occ.has_reads = true;
      }
      occ.before_compute = fencepost(ActorPhase::Compute, false);
      prog.push_back(ComputeStmt{actor_id});
      occ.before_write = fencepost(ActorPhase::Write, false);
      for (const auto* c : ref.graph->outputs_of(actor_id)) {
        prog.push_back(WriteStmt{c->id, actor_id});
        occ.has_writes = true;
      }
      occ.after_write = fencepost(ActorPhase::Write, true);
      ip.occurrences.push_back(std::move(occ));
    }
  }
  return ip;
}

namespace {

int level_rank(Granularity g) { return static_cast<int>(g); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::vector<MeasurableBlock> measurable_blocks(const InstrumentedProgram& ip,
                                               std::span<const SdfGraph> graphs,
                                               Granularity level) {
  require(level_rank(level) <= level_rank(ip.granularity),
          "program annotated at '" + std::string(to_string(ip.granularity)) +
              "' cannot measure at the finer level '" + std::string(to_string(level)) + "'");
  const auto actors = index_actors(graphs);
  std::vector<MeasurableBlock> blocks;

  auto block_for = [&](const std::string& id) -> MeasurableBlock* {
    for (auto& b : blocks) {
      if (b.id == id) return &b;
    }
    return nullptr;
  };

  if (level == Granularity::Phase || level == Granularity::Actor) {
    for (const auto& occ : ip.occurrences) {
      struct Slot {
        std::optional<ActorPhase> phase;
        std::size_t start, stop;
        bool non_empty;
      };
      std::vector<Slot> slots;
      if (level == Granularity::Phase) {
        slots = {{ActorPhase::Read, occ.before_read, occ.before_compute, occ.has_reads},
                 {ActorPhase::Compute, occ.before_compute, occ.before_write, true},
                 {ActorPhase::Write, occ.before_write, occ.after_write, occ.has_writes}};
      } else {
        slots = {{std::nullopt, occ.before_read, occ.after_write, true}};
      }
      for (const auto& s : slots) {
        if (!s.non_empty) continue;
        const auto id = s.phase ? occ.actor + "." + std::string(to_string(*s.phase)) : occ.actor;
        auto* b = block_for(id);
        if (!b) {
          blocks.push_back({id, s.phase ? BlockKind::Phase : BlockKind::Actor, occ.graph, occ.actor,
                            s.phase, {}, {}, 1});
          b = &blocks.back();
        }
        b->starts.push_back({occ.tile, s.start});
        b->stops.push_back({occ.tile, s.stop});
      }
    }
  } else if (level == Granularity::Sdfg) {
    for (const auto& g : graphs) {
      MeasurableBlock b;
      b.id = g.id + ".iteration";
      b.kind = BlockKind::Sdfg;
      b.graph = g.id;
      std::map<std::string, std::size_t> last_sink;  // tile -> position
      for (const auto& occ : ip.occurrences) {
        if (occ.graph != g.id) continue;
        const auto& ref = lookup(actors, occ.actor);
        if (ref.graph->is_source(occ.actor)) b.starts.push_back({occ.tile, occ.before_read});
        if (ref.graph->is_sink(occ.actor)) last_sink[occ.tile] = occ.after_write;
      }
      for (const auto& [tile, pos] : last_sink) b.stops.push_back({tile, pos});
      b.required_stop_count = static_cast<int>(last_sink.size());
      if (!b.starts.empty() && !b.stops.empty()) blocks.push_back(std::move(b));
    }
  }

  for (const auto& b : blocks) {
    for (const auto& f : b.starts) require(f.position != Occurrence::npos, "missing start fencepost for " + b.id);
    for (const auto& f : b.stops) require(f.position != Occurrence::npos, "missing stop fencepost for " + b.id);
  }
  return blocks;
}

std::vector<MeasurementScenario> enumerate_scenarios(const InstrumentedProgram& ip,
                                                     std::span<const SdfGraph> graphs,
                                                     const Mapping& m,
                                                     std::optional<Granularity> level,
                                                     int num_measurements) {
  (void)m;
  const auto lvl = level.value_or(ip.granularity);
  std::vector<MeasurementScenario> out;
  if (lvl == Granularity::System) return out;

  for (auto& block : measurable_blocks(ip, graphs, lvl)) {
    MeasurementScenario s;
    s.id = block.id;
    s.control_cost = ip.control_cost;
    s.programs = ip.programs;
    for (const auto& f : block.starts) s.programs.at(f.tile)[f.position] = StartStmt{block.id, ip.control_cost};
    for (const auto& f : block.stops) s.programs.at(f.tile)[f.position] = StopStmt{block.id, ip.control_cost};
    s.controller.required_stop_count = block.required_stop_count;
    s.controller.auto_restart = true;
    s.controller.num_measurements = std::max(num_measurements, 1);
    s.controller.buffer_capacity = static_cast<std::size_t>(s.controller.num_measurements);
    if (block.kind == BlockKind::Sdfg) s.controller.starts_per_iteration = static_cast<int>(block.starts.size());
    s.target = std::move(block);
    out.push_back(std::move(s));
  }
  return out;
}

ProgramSet neutralize(const ProgramSet& programs, Cycles control_cost) {
  ProgramSet out = programs;
  for (auto& [tile, prog] : out) {
    for (auto& stmt : prog) {
      if (std::holds_alternative<StartStmt>(stmt) || std::holds_alternative<StopStmt>(stmt)) {
        stmt = NopStmt{control_cost};
      }
    }
  }
  return out;
}

ProgramSet neutralize(const MeasurementScenario& s) { return neutralize(s.programs, s.control_cost); }

Cycles added_cycles(Granularity g, Cycles control_cost) {
  switch (g) {
    case Granularity::Phase: return 4 * control_cost;
    case Granularity::Actor: return 2 * control_cost;
    case Granularity::Sdfg: return control_cost;
    case Granularity::System: return 0;
  }
  return 0;
}

double invasiveness(Cycles actor_cycles, Granularity g, Cycles control_cost) {
  if (actor_cycles <= 0) throw NonPositiveCycles("invasiveness needs actor_cycles > 0");
  return static_cast<double>(added_cycles(g, control_cost)) / static_cast<double>(actor_cycles) * 100.0;
}

void write_scenario_manifest(std::ostream& os, std::span<const MeasurementScenario> scenarios) {
  os << "scenario_id,kind,graph,actor,phase,required_stops\n";
  for (const auto& s : scenarios) {
    const auto& b = s.target;
    std::string_view kind = b.kind == BlockKind::Phase   ? "phase"
                            : b.kind == BlockKind::Actor ? "actor"
                            : b.kind == BlockKind::Sdfg  ? "sdfg"
                                                         : "system";
    os << s.id << ',' << kind << ',' << b.graph << ',' << b.actor << ','
       << (b.phase ? to_string(*b.phase) : std::string_view{}) << ',' << b.required_stop_count << '\n';
  }
}

}  // namespace sdfmeas
