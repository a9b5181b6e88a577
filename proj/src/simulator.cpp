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

#include "sdfmeas/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <tuple>

namespace sdfmeas {

ValidationReport validate_cost_model(const CostModel& c) {
  ValidationReport r;
  if (c.poll_interval < 1) r.add("poll_interval must be >= 1");
  if (c.poll_bus_words < 0) r.add("poll_bus_words must be >= 0");
  if (c.read_overhead_per_token < 0 || c.write_overhead_per_token < 0) {
    r.add("per-token overheads must be >= 0");
  }
  return r;
}

Cycles transfer_cost_per_token(const Channel& channel, const BusSpec& bus) {
  return channel.token_size * bus.cycles_per_word;
}

std::string_view to_string(StatementKind k) {
  switch (k) {
    case StatementKind::Read: return "read";
    case StatementKind::Compute: return "compute";
    case StatementKind::Write: return "write";
    case StatementKind::Delay: return "delay";
    case StatementKind::Start: return "start";
    case StatementKind::Stop: return "stop";
    case StatementKind::Nop: return "nop";
  }
  return "?";
}

bool detect_deadlock(std::span<const TileStatus> tiles, std::span<const ChannelOccupancy> channels) {
  bool any = false;
  for (const auto& t : tiles) {
    if (!t.has_program) continue;
    any = true;
    if (!t.wait) return false;
    const auto& occ = channels[t.wait->channel];
    const bool satisfiable = t.wait->is_read ? occ.tokens >= t.wait->amount
                                             : occ.capacity - occ.tokens >= t.wait->amount;
    if (satisfiable) return false;
  }
  return any;
}

namespace {

struct CStmt {
  StatementKind kind = StatementKind::Delay;
  int channel = -1;
  int actor = -1;
  Cycles cycles = 0;
  std::string subject;
  bool ends_firing = false;
};

struct ChannelRt {
  std::string id;
  int graph = 0;
  std::int64_t tokens = 0;
  std::int64_t capacity = 0;
  std::int64_t produce = 0;
  std::int64_t consume = 0;
  std::int64_t token_size = 1;
  bool shared = true;
};

struct ActorRt {
  std::string id;
  int graph = 0;
  CostSpec cost;
  std::mt19937_64 rng;
  std::int64_t completed = 0;
  std::int64_t q = 1;
  bool has_outputs = false;
};

enum class Step { Idle, Begin, Timed, PollPending, PollDone, PollWait, DataPending, LocalTransfer };

struct TileRt {
  std::vector<CStmt> prog;
  std::size_t pc = 0;
  Step step = Step::Idle;
  Cycles stmt_start = 0;
  Cycles wake = kNever;
  std::int64_t words_left = 0;
};

struct PendingTrigger {
  TriggerEvent event;
  std::uint64_t seq;
};

Cycles draw_compute(ActorRt& a) {
  const auto& c = a.cost;
  if (c.mode == CostMode::FixedAvg || c.best == c.worst) return c.avg;
  // Triangular(best, mode = avg, worst) by inverse CDF.
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double u = u01(a.rng);
  const double lo = static_cast<double>(c.best);
  const double mode = static_cast<double>(c.avg);
  const double hi = static_cast<double>(c.worst);
  const double split = (mode - lo) / (hi - lo);
  const double x = u < split ? lo + std::sqrt(u * (hi - lo) * (mode - lo))
                             : hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
  return std::clamp<Cycles>(std::llround(x), c.best, c.worst);
}

class Engine {
 public:
  Engine(const Platform& platform, const Mapping& mapping, const ProgramSet& programs,
         std::span<const SdfGraph> graphs, const SimulationConfig& config)
      : platform_(platform), config_(config), controller_(config.measured_block) {
    build_channels(mapping, graphs);
    build_actors(graphs);
    build_tiles(programs);
    if (config_.controller) controller_.configure(*config_.controller);
  }

  Trace run();

 private:
  void build_channels(const Mapping& mapping, std::span<const SdfGraph> graphs);
  void build_actors(std::span<const SdfGraph> graphs);
  void build_tiles(const ProgramSet& programs);

  void process_cycle(Cycles now);
  void wake(std::size_t i, Cycles now);
  void begin_statement(std::size_t i, Cycles now);
  void finish_statement(std::size_t i, Cycles now);
  void start_access(std::size_t i, Cycles now);
  void evaluate_poll(std::size_t i, Cycles now);
  void request_bus(std::size_t i, Step step, std::int64_t words, Cycles now);
  void on_bus_done(std::size_t i, Cycles now);
  void apply_transfer(std::size_t i);
  Cycles access_overhead(const CStmt& s) const;
  bool condition_holds(const CStmt& s) const;
  bool grant(Cycles now);
  void finish_grant(Cycles now);
  void flush_triggers(Cycles now);
  bool stop_reached() const;
  bool has_targets() const;
  Cycles next_event() const;
  void check_deadlock(Cycles now);

  const Platform& platform_;
  const SimulationConfig& config_;
  MeasurementController controller_;

  std::vector<ChannelRt> channels_;
  std::map<std::string, int, std::less<>> channel_index_;
  std::vector<ActorRt> actors_;
  std::map<std::string, int, std::less<>> actor_index_;
  std::vector<std::string> graph_ids_;
  std::vector<std::vector<int>> graph_actors_;
  std::vector<std::int64_t> iterations_;
  std::vector<TileRt> tiles_;

  struct {
    bool active = false;
    std::size_t tile = 0;
    std::int64_t chunk = 0;
    Cycles end = 0;
    std::optional<std::size_t> last_grant;
  } bus_;

  std::vector<PendingTrigger> pending_triggers_;
  std::uint64_t trigger_seq_ = 0;
  bool poll_failed_ = false;
  Trace trace_;
};

void Engine::build_channels(const Mapping& mapping, std::span<const SdfGraph> graphs) {
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    graph_ids_.push_back(graphs[g].id);
    for (const auto& c : graphs[g].channels) {
      ChannelRt rt;
      rt.id = c.id;
      rt.graph = static_cast<int>(g);
      rt.tokens = c.initial_tokens;
      rt.capacity = c.capacity;
      rt.produce = c.produce_rate;
      rt.consume = c.consume_rate;
      rt.token_size = c.token_size;
      if (auto it = mapping.channel_to_region.find(c.id); it != mapping.channel_to_region.end()) {
        if (const auto* region = platform_.find_region(it->second)) {
          rt.shared = region->kind == MemoryKind::Shared;
        }
      }
      channel_index_[c.id] = static_cast<int>(channels_.size());
      channels_.push_back(std::move(rt));
    }
  }
}

void Engine::build_actors(std::span<const SdfGraph> graphs) {
  graph_actors_.resize(graphs.size());
  iterations_.assign(graphs.size(), 0);
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    const auto q = repetition_vector(graphs[g]);
    for (const auto& a : graphs[g].actors) {
      ActorRt rt;
      rt.id = a.id;
      rt.graph = static_cast<int>(g);
      rt.cost = a.compute;
      rt.q = q.at(a.id);
      rt.has_outputs = !graphs[g].is_sink(a.id);
      rt.rng.seed(derive_seed(config_.seed, actors_.size(), 0x5eed));
      actor_index_[a.id] = static_cast<int>(actors_.size());
      graph_actors_[g].push_back(static_cast<int>(actors_.size()));
      actors_.push_back(std::move(rt));
    }
  }
}

void Engine::build_tiles(const ProgramSet& programs) {
  for (const auto& [tile_id, prog] : programs) {
    if (!platform_.tile_index(tile_id)) {
      throw std::invalid_argument("program for unknown tile '" + tile_id + "'");
    }
  }
  tiles_.resize(platform_.tiles.size());
  for (std::size_t i = 0; i < platform_.tiles.size(); ++i) {
    trace_.tile_ids.push_back(platform_.tiles[i].id);
    auto it = programs.find(platform_.tiles[i].id);
    if (it == programs.end()) continue;
    auto& tile = tiles_[i];
    for (const auto& stmt : it->second) {
      CStmt c;
      auto channel_of = [&](const std::string& id) {
        auto ch = channel_index_.find(id);
        if (ch == channel_index_.end()) throw std::invalid_argument("unknown channel '" + id + "'");
        return ch->second;
      };
      auto actor_of = [&](const std::string& id) {
        auto a = actor_index_.find(id);
        if (a == actor_index_.end()) throw UnknownActor("unknown actor '" + id + "'");
        return a->second;
      };
      if (auto* r = std::get_if<ReadStmt>(&stmt)) {
        c = {StatementKind::Read, channel_of(r->channel), actor_of(r->actor), 0, r->channel, false};
      } else if (auto* w = std::get_if<WriteStmt>(&stmt)) {
        c = {StatementKind::Write, channel_of(w->channel), actor_of(w->actor), 0, w->channel, false};
      } else if (auto* k = std::get_if<ComputeStmt>(&stmt)) {
        c = {StatementKind::Compute, -1, actor_of(k->actor), 0, k->actor, false};
      } else if (auto* d = std::get_if<DelayStmt>(&stmt)) {
        c = {StatementKind::Delay, -1, -1, d->cycles, {}, false};
      } else if (auto* n = std::get_if<NopStmt>(&stmt)) {
        c = {StatementKind::Nop, -1, -1, n->cycles, {}, false};
      } else if (auto* s = std::get_if<StartStmt>(&stmt)) {
        c = {StatementKind::Start, -1, -1, s->cycles, s->block, false};
      } else if (auto* p = std::get_if<StopStmt>(&stmt)) {
        c = {StatementKind::Stop, -1, -1, p->cycles, p->block, false};
      }
      if (c.cycles < 0) throw std::invalid_argument("negative statement length");
      tile.prog.push_back(std::move(c));
    }
    // A firing ends with the last write after its compute, or the compute
    // itself for sinks.
    auto& prog = tile.prog;
    for (std::size_t k = 0; k < prog.size(); ++k) {
      if (prog[k].kind != StatementKind::Compute) continue;
      const int actor = prog[k].actor;
      std::size_t last = k;
      if (actors_[actor].has_outputs) {
        for (std::size_t j = k + 1; j < prog.size(); ++j) {
          const auto kind = prog[j].kind;
          if (kind == StatementKind::Write && prog[j].actor == actor) {
            last = j;
          } else if (kind == StatementKind::Read || kind == StatementKind::Compute ||
                     kind == StatementKind::Write) {
            break;
          }
        }
      }
      prog[last].ends_firing = true;
    }
    if (!prog.empty()) {
      tile.step = Step::Begin;
      tile.wake = 0;
    }
  }
}

bool Engine::condition_holds(const CStmt& s) const {
  const auto& ch = channels_[s.channel];
  if (s.kind == StatementKind::Read) return ch.tokens >= ch.consume;
  return ch.capacity - ch.tokens >= ch.produce;
}

Cycles Engine::access_overhead(const CStmt& s) const {
  const auto& ch = channels_[s.channel];
  return s.kind == StatementKind::Read ? ch.consume * config_.cost.read_overhead_per_token
                                       : ch.produce * config_.cost.write_overhead_per_token;
}

void Engine::apply_transfer(std::size_t i) {
  const auto& s = tiles_[i].prog[tiles_[i].pc];
  auto& ch = channels_[s.channel];
  if (s.kind == StatementKind::Read) {
    ch.tokens -= ch.consume;
    if (ch.tokens < 0) throw Error("token underflow on channel '" + ch.id + "'");
  } else {
    ch.tokens += ch.produce;
    if (ch.tokens > ch.capacity) throw Error("capacity exceeded on channel '" + ch.id + "'");
  }
}

void Engine::begin_statement(std::size_t i, Cycles now) {
  auto& t = tiles_[i];
  auto& s = t.prog[t.pc];
  t.stmt_start = now;
  switch (s.kind) {
    case StatementKind::Compute:
      t.step = Step::Timed;
      t.wake = now + draw_compute(actors_[s.actor]);
      return;
    case StatementKind::Delay:
    case StatementKind::Nop:
      t.step = Step::Timed;
      t.wake = now + s.cycles;
      return;
    case StatementKind::Start:
    case StatementKind::Stop: {
      const bool start = s.kind == StatementKind::Start;
      pending_triggers_.push_back(
          {{start ? TriggerKind::Start : TriggerKind::Stop, s.subject, i, start ? now + s.cycles : now},
           trigger_seq_++});
      t.step = Step::Timed;
      t.wake = now + s.cycles;
      return;
    }
    case StatementKind::Read:
    case StatementKind::Write:
      start_access(i, now);
      return;
  }
}

void Engine::start_access(std::size_t i, Cycles now) {
  auto& t = tiles_[i];
  const auto& s = t.prog[t.pc];
  if (channels_[s.channel].shared && config_.cost.poll_bus_words > 0) {
    request_bus(i, Step::PollPending, config_.cost.poll_bus_words, now);
  } else {
    t.step = Step::PollDone;
    t.wake = now;
  }
}

void Engine::evaluate_poll(std::size_t i, Cycles now) {
  auto& t = tiles_[i];
  const auto& s = t.prog[t.pc];
  if (!condition_holds(s)) {
    t.step = Step::PollWait;
    t.wake = now + config_.cost.poll_interval;
    poll_failed_ = true;
    return;
  }
  const auto& ch = channels_[s.channel];
  const auto words = (s.kind == StatementKind::Read ? ch.consume : ch.produce) * ch.token_size;
  if (ch.shared) {
    request_bus(i, Step::DataPending, words, now);
  } else {
    t.step = Step::LocalTransfer;
    t.wake = now + words * platform_.bus.cycles_per_word;
  }
}

void Engine::request_bus(std::size_t i, Step step, std::int64_t words, Cycles now) {
  auto& t = tiles_[i];
  t.step = step;
  t.words_left = words;
  t.wake = kNever;
  if (words <= 0) on_bus_done(i, now);
}

void Engine::on_bus_done(std::size_t i, Cycles now) {
  auto& t = tiles_[i];
  if (t.step == Step::PollPending) {
    t.step = Step::PollDone;
    t.wake = now;
  } else if (t.step == Step::DataPending) {
    apply_transfer(i);
    t.step = Step::Timed;
    t.wake = now + access_overhead(t.prog[t.pc]);
  }
}

void Engine::finish_statement(std::size_t i, Cycles now) {
  auto& t = tiles_[i];
  const auto& s = t.prog[t.pc];
  if (config_.record_statements) {
    trace_.records.push_back({i, t.pc, s.kind, s.subject, t.stmt_start, now, false});
  }
  if (s.ends_firing) {
    auto& a = actors_[s.actor];
    ++a.completed;
    std::int64_t iters = INT64_MAX;
    for (int other : graph_actors_[a.graph]) {
      iters = std::min(iters, actors_[other].completed / actors_[other].q);
    }
    iterations_[a.graph] = iters;
  }
  t.pc = (t.pc + 1) % t.prog.size();
}

void Engine::wake(std::size_t i, Cycles now) {
  auto& t = tiles_[i];
  t.wake = kNever;
  switch (t.step) {
    case Step::Begin:
      begin_statement(i, now);
      break;
    case Step::Timed:
      finish_statement(i, now);
      begin_statement(i, now);
      break;
    case Step::PollDone:
      evaluate_poll(i, now);
      break;
    case Step::PollWait:
      start_access(i, now);
      break;
    case Step::LocalTransfer:
      apply_transfer(i);
      t.step = Step::Timed;
      t.wake = now + access_overhead(t.prog[t.pc]);
      break;
    case Step::Idle:
    case Step::PollPending:
    case Step::DataPending:
      break;
  }
}

bool Engine::grant(Cycles now) {
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < tiles_.size(); ++i) {
    const auto step = tiles_[i].step;
    if ((step == Step::PollPending || step == Step::DataPending) && tiles_[i].words_left > 0) {
      pending.push_back(i);
    }
  }
  if (pending.empty()) return false;
  const auto& bus = platform_.bus;
  const auto winner = select_next(pending, bus.arbitration, bus_.last_grant, tiles_.size());
  bus_.active = true;
  bus_.tile = winner;
  bus_.chunk = std::min(tiles_[winner].words_left, bus.words_per_grant);
  bus_.end = now + grant_duration(bus, bus_.chunk);
  bus_.last_grant = winner;
  if (bus_.end > now) {
    auto& busy = trace_.bus_busy;
    if (!busy.empty() && busy.back().end == now) {
      busy.back().end = bus_.end;
    } else {
      busy.push_back({now, bus_.end});
    }
  }
  return true;
}

void Engine::finish_grant(Cycles now) {
  bus_.active = false;
  auto& t = tiles_[bus_.tile];
  t.words_left -= bus_.chunk;
  if (t.words_left <= 0) on_bus_done(bus_.tile, now);
}

void Engine::process_cycle(Cycles now) {
  const std::size_t limit = 64 + 8 * std::accumulate(tiles_.begin(), tiles_.end(), std::size_t{0},
                                                      [](auto n, const auto& t) { return n + t.prog.size(); });
  std::size_t passes = 0;
  bool progress = true;
  while (progress) {
    progress = false;
    if (bus_.active && bus_.end == now) {
      finish_grant(now);
      progress = true;
    }
    for (std::size_t i = 0; i < tiles_.size(); ++i) {
      if (tiles_[i].wake == now) {
        wake(i, now);
        progress = true;
      }
    }
    if (!bus_.active && grant(now)) progress = true;
    if (++passes > limit) {
      throw Error("no simulated time passes at cycle " + std::to_string(now) +
                  " (zero-length statement loop)");
    }
  }
}

void Engine::flush_triggers(Cycles now) {
  auto due = std::partition(pending_triggers_.begin(), pending_triggers_.end(),
                            [&](const auto& p) { return p.event.cycle > now; });
  if (due == pending_triggers_.end()) return;
  std::vector<PendingTrigger> ready(due, pending_triggers_.end());
  pending_triggers_.erase(due, pending_triggers_.end());
  std::sort(ready.begin(), ready.end(), [](const auto& a, const auto& b) {
    return std::tie(a.event.cycle, a.event.tile, a.seq) < std::tie(b.event.cycle, b.event.tile, b.seq);
  });
  for (auto& p : ready) {
    if (config_.controller) {
      if (p.event.kind == TriggerKind::Start) {
        controller_.on_start(p.event.cycle);
      } else {
        controller_.on_stop(p.event.cycle);
      }
    }
    trace_.triggers.push_back(std::move(p.event));
  }
}

bool Engine::has_targets() const {
  return config_.stop.graph_iterations.has_value() || config_.stop.measurements.has_value();
}

bool Engine::stop_reached() const {
  if (const auto& gi = config_.stop.graph_iterations) {
    for (std::size_t g = 0; g < graph_ids_.size(); ++g) {
      if (graph_ids_[g] == gi->first && iterations_[g] >= gi->second) return true;
    }
  }
  if (config_.stop.measurements && config_.controller) {
    const auto& st = controller_.state();
    if (st.completed >= *config_.stop.measurements || st.mode == ControllerMode::Done) return true;
  }
  return false;
}

Cycles Engine::next_event() const {
  Cycles next = bus_.active ? bus_.end : kNever;
  for (const auto& t : tiles_) next = std::min(next, t.wake);
  return next;
}

void Engine::check_deadlock(Cycles now) {
  std::vector<TileStatus> status(tiles_.size());
  for (std::size_t i = 0; i < tiles_.size(); ++i) {
    const auto& t = tiles_[i];
    status[i].has_program = !t.prog.empty();
    if (t.step == Step::PollWait || t.step == Step::PollPending || t.step == Step::PollDone) {
      const auto& s = t.prog[t.pc];
      const auto& ch = channels_[s.channel];
      const bool read = s.kind == StatementKind::Read;
      status[i].wait = ChannelWait{static_cast<std::size_t>(s.channel), read, read ? ch.consume : ch.produce};
    }
  }
  std::vector<ChannelOccupancy> occ;
  occ.reserve(channels_.size());
  for (const auto& c : channels_) occ.push_back({c.tokens, c.capacity});
  if (!detect_deadlock(status, occ)) return;

  std::vector<std::string> blocked;
  for (std::size_t i = 0; i < tiles_.size(); ++i) {
    const auto& t = tiles_[i];
    if (t.prog.empty()) continue;
    const auto& s = t.prog[t.pc];
    const auto& ch = channels_[s.channel];
    blocked.push_back("tile " + platform_.tiles[i].id + " @" + std::to_string(t.pc) + ": " +
                      std::string(to_string(s.kind)) + "(" + ch.id + ") of " + actors_[s.actor].id +
                      " [tokens " + std::to_string(ch.tokens) + "/" + std::to_string(ch.capacity) + "]");
  }
  throw DeadlockError(now, std::move(blocked));
}

Trace Engine::run() {
  const bool any_program =
      std::any_of(tiles_.begin(), tiles_.end(), [](const auto& t) { return !t.prog.empty(); });
  if (!any_program) throw std::invalid_argument("simulate: no tile has a program");

  Cycles now = 0;
  while (true) {
    poll_failed_ = false;
    process_cycle(now);
    flush_triggers(now);
    if (stop_reached()) break;
    if (poll_failed_) check_deadlock(now);
    const auto next = next_event();
    if (next == kNever) throw DeadlockError(now, {"no tile can make progress"});
    if (next > config_.stop.cycle_budget) {
      now = config_.stop.cycle_budget;
      if (has_targets()) {
        throw CycleBudgetExceeded("cycle budget of " + std::to_string(config_.stop.cycle_budget) +
                                  " exhausted before the stop condition was met");
      }
      break;
    }
    now = next;
  }

  trace_.end_cycle = now;
  if (config_.record_statements) {
    for (std::size_t i = 0; i < tiles_.size(); ++i) {
      const auto& t = tiles_[i];
      if (t.prog.empty() || t.step == Step::Begin || t.stmt_start >= now) continue;
      const auto& s = t.prog[t.pc];
      trace_.records.push_back({i, t.pc, s.kind, s.subject, t.stmt_start, now, true});
    }
  }
  trace_.timing = controller_.drain_buffer();
  trace_.overflow_count = controller_.overflow_count();
  trace_.stray_stops = controller_.stray_stops();
  trace_.ignored_starts = controller_.ignored_starts();
  for (std::size_t g = 0; g < graph_ids_.size(); ++g) {
    trace_.iterations[graph_ids_[g]] = iterations_[g];
    auto& state = trace_.final_state[graph_ids_[g]];
    for (const auto& c : channels_) {
      if (c.graph == static_cast<int>(g)) state.tokens[c.id] = c.tokens;
    }
    for (int a : graph_actors_[g]) state.firings[actors_[a].id] = actors_[a].completed;
  }
  return std::move(trace_);
}

}  // namespace

Trace simulate(const Platform& platform, const Mapping& mapping, const ProgramSet& programs,
               std::span<const SdfGraph> graphs, const SimulationConfig& config) {
  Engine engine(platform, mapping, programs, graphs, config);
  return engine.run();
}

void write_trace(std::ostream& os, const Trace& trace) {
  os << "tile,statement,subject,start,end\n";
  for (const auto& r : trace.records) {
    os << trace.tile_ids[r.tile] << ',' << to_string(r.kind) << ',' << r.subject << ',' << r.start
       << ',' << r.end << '\n';
  }
}

}  // namespace sdfmeas
