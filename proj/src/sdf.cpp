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

#include "sdfmeas/sdf.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <set>

namespace sdfmeas {

std::int64_t default_capacity(const Channel& c) {
  return std::max({c.produce_rate, c.consume_rate, c.initial_tokens}) * 2;
}

const Actor* SdfGraph::find_actor(std::string_view actor_id) const {
  for (const auto& a : actors) {
    if (a.id == actor_id) return &a;
  }
  return nullptr;
}

const Channel* SdfGraph::find_channel(std::string_view channel_id) const {
  for (const auto& c : channels) {
    if (c.id == channel_id) return &c;
  }
  return nullptr;
}

std::vector<const Channel*> SdfGraph::inputs_of(std::string_view actor_id) const {
  std::vector<const Channel*> out;
  for (const auto& c : channels) {
    if (c.dst_actor == actor_id) out.push_back(&c);
  }
  return out;
}

std::vector<const Channel*> SdfGraph::outputs_of(std::string_view actor_id) const {
  std::vector<const Channel*> out;
  for (const auto& c : channels) {
    if (c.src_actor == actor_id) out.push_back(&c);
  }
  return out;
}

TokenState initial_state(const SdfGraph& graph) {
  TokenState s;
  for (const auto& c : graph.channels) s.tokens[c.id] = c.initial_tokens;
  for (const auto& a : graph.actors) s.firings[a.id] = 0;
  return s;
}

namespace {

// Reduced non-negative fraction; rates are small so int64 suffices.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction make(std::int64_t n, std::int64_t d) {
    const auto g = std::gcd(n, d);
    return {n / g, d / g};
  }
  Fraction times(std::int64_t n, std::int64_t d) const { return make(num * n, den * d); }
  bool operator==(const Fraction&) const = default;
};

}  // namespace

RepetitionVector repetition_vector(const SdfGraph& graph) {
  const auto n = graph.actors.size();
  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[graph.actors[i].id] = i;

  struct Edge {
    std::size_t other;
    std::int64_t mine;    // rate at this endpoint
    std::int64_t theirs;  // rate at the other endpoint
  };
  std::vector<std::vector<Edge>> adj(n);
  for (const auto& c : graph.channels) {
    auto s = index.find(c.src_actor);
    auto d = index.find(c.dst_actor);
    if (s == index.end() || d == index.end()) {
      throw InconsistentGraph("channel '" + c.id + "' references an unknown actor");
    }
    if (c.produce_rate <= 0 || c.consume_rate <= 0) {
      throw InconsistentGraph("channel '" + c.id + "' has a non-positive rate");
    }
    adj[s->second].push_back({d->second, c.produce_rate, c.consume_rate});
    adj[d->second].push_back({s->second, c.consume_rate, c.produce_rate});
  }

  std::vector<std::optional<Fraction>> q(n);
  RepetitionVector result;
  for (std::size_t root = 0; root < n; ++root) {
    if (q[root]) continue;
    std::vector<std::size_t> component;
    std::deque<std::size_t> frontier{root};
    q[root] = Fraction{1, 1};
    while (!frontier.empty()) {
      const auto u = frontier.front();
      frontier.pop_front();
      component.push_back(u);
      for (const auto& e : adj[u]) {
        // q[u] * mine == q[other] * theirs
        const auto implied = q[u]->times(e.mine, e.theirs);
        if (!q[e.other]) {
          q[e.other] = implied;
          frontier.push_back(e.other);
        } else if (!(*q[e.other] == implied)) {
          throw InconsistentGraph("graph '" + graph.id +
                                  "' has no repetition vector (balance equations unsolvable)");
        }
      }
    }
    std::int64_t lcm = 1;
    for (auto u : component) lcm = std::lcm(lcm, q[u]->den);
    std::int64_t g = 0;
    for (auto u : component) g = std::gcd(g, q[u]->num * (lcm / q[u]->den));
    for (auto u : component) result[graph.actors[u].id] = q[u]->num * (lcm / q[u]->den) / g;
  }
  return result;
}

ValidationReport validate_graph(const SdfGraph& graph) {
  ValidationReport r;
  if (graph.id.empty()) r.add("graph id is empty");

  std::set<std::string_view> actor_ids;
  for (const auto& a : graph.actors) {
    if (a.id.empty()) r.add("actor with empty id");
    if (!actor_ids.insert(a.id).second) r.add("duplicate actor id '" + a.id + "'");
    const auto& c = a.compute;
    if (c.best < 0 || c.avg < 0 || c.worst < 0) {
      r.add("actor '" + a.id + "': negative compute cycles");
    }
    if (!(c.best <= c.avg && c.avg <= c.worst)) {
      r.add("actor '" + a.id + "': compute cycles violate best <= avg <= worst");
    }
  }

  std::set<std::string_view> channel_ids;
  bool structural_ok = r.ok();
  for (const auto& c : graph.channels) {
    const std::string where = "channel '" + c.id + "': ";
    if (c.id.empty()) r.add("channel with empty id");
    if (!channel_ids.insert(c.id).second) r.add("duplicate channel id '" + c.id + "'");
    if (!graph.find_actor(c.src_actor)) {
      r.add(where + "unknown source actor '" + c.src_actor + "'");
      structural_ok = false;
    }
    if (!graph.find_actor(c.dst_actor)) {
      r.add(where + "unknown destination actor '" + c.dst_actor + "'");
      structural_ok = false;
    }
    if (c.produce_rate <= 0 || c.consume_rate <= 0) {
      r.add(where + "non-positive rate");
      structural_ok = false;
    }
    if (c.token_size <= 0) r.add(where + "non-positive token size");
    if (c.capacity <= 0) r.add(where + "non-positive capacity");
    if (c.initial_tokens < 0) r.add(where + "negative initial tokens");
    if (c.initial_tokens > c.capacity) r.add(where + "initial tokens exceed capacity");
    if (c.capacity < std::max(c.produce_rate, c.consume_rate)) {
      r.add(where + "capacity below max(produce, consume)");
    }
  }

  if (structural_ok) {
    try {
      (void)repetition_vector(graph);
    } catch (const InconsistentGraph&) {
      r.add("graph '" + graph.id + "' is inconsistent: no repetition vector");
    }
  }
  return r;
}

namespace {
const Actor& require_actor(std::string_view actor, const SdfGraph& graph) {
  const auto* a = graph.find_actor(actor);
  if (!a) throw UnknownActor("unknown actor '" + std::string(actor) + "' in graph '" + graph.id + "'");
  return *a;
}

std::int64_t tokens_on(const TokenState& state, const Channel& c) {
  auto it = state.tokens.find(c.id);
  return it == state.tokens.end() ? c.initial_tokens : it->second;
}
}  // namespace

bool can_fire(std::string_view actor, const TokenState& state, const SdfGraph& graph) {
  require_actor(actor, graph);
  for (const auto* c : graph.inputs_of(actor)) {
    if (tokens_on(state, *c) < c->consume_rate) return false;
  }
  for (const auto* c : graph.outputs_of(actor)) {
    // A self-loop consumes before it produces.
    auto occupied = tokens_on(state, *c);
    if (c->dst_actor == actor) occupied -= c->consume_rate;
    if (c->capacity - occupied < c->produce_rate) return false;
  }
  return true;
}

TokenState fire(std::string_view actor, TokenState state, const SdfGraph& graph) {
  if (!can_fire(actor, state, graph)) {
    throw FiringNotEnabled("actor '" + std::string(actor) + "' is not enabled");
  }
  for (const auto* c : graph.inputs_of(actor)) {
    state.tokens[c->id] = tokens_on(state, *c) - c->consume_rate;
  }
  for (const auto* c : graph.outputs_of(actor)) {
    state.tokens[c->id] = tokens_on(state, *c) + c->produce_rate;
  }
  ++state.firings[std::string(actor)];
  return state;
}

bool is_iteration_complete(const TokenState& state, const SdfGraph& graph) {
  return is_iteration_complete(state, graph, repetition_vector(graph));
}

bool is_iteration_complete(const TokenState& state, const SdfGraph& graph,
                           const RepetitionVector& q) {
  for (const auto& c : graph.channels) {
    if (tokens_on(state, c) != c.initial_tokens) return false;
  }
  std::optional<std::int64_t> k;
  for (const auto& a : graph.actors) {
    auto it = state.firings.find(a.id);
    const std::int64_t fired = it == state.firings.end() ? 0 : it->second;
    const auto qa = q.at(a.id);
    if (fired % qa != 0) return false;
    const auto ka = fired / qa;
    if (k && *k != ka) return false;
    k = ka;
  }
  return k.value_or(0) >= 1;
}

}  // namespace sdfmeas
