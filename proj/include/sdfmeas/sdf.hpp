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
 * @file sdf.hpp
 * @brief Synchronous dataflow graph model.
 *
 * An actor fires in three phases (read all inputs, compute, write all
 * outputs). Each channel is a bounded FIFO with fixed production and
 * consumption rates, so the firing counts that restore the initial token
 * distribution (the repetition vector) can be computed statically.
 *
 * Tokens are counted, never valued.
 */

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sdfmeas/common.hpp"

namespace sdfmeas {

enum class CostMode { FixedAvg, Triangular };

/// Measured or assumed compute cost of one firing.
struct CostSpec {
  Cycles best = 0;
  Cycles avg = 0;
  Cycles worst = 0;
  CostMode mode = CostMode::FixedAvg;

  static CostSpec fixed(Cycles c) { return {c, c, c, CostMode::FixedAvg}; }
  bool operator==(const CostSpec&) const = default;
};

struct Actor {
  std::string id;
  std::string name;
  CostSpec compute;

  bool operator==(const Actor&) const = default;
};

struct Channel {
  std::string id;
  std::string src_actor;
  std::string dst_actor;
  std::int64_t produce_rate = 1;
  std::int64_t consume_rate = 1;
  std::int64_t initial_tokens = 0;
  std::int64_t capacity = 0;
  std::int64_t token_size = 1;  // words per token

  bool operator==(const Channel&) const = default;
};

/// max(produce, consume, initial) x 2.
std::int64_t default_capacity(const Channel& c);

struct SdfGraph {
  std::string id;
  std::vector<Actor> actors;
  std::vector<Channel> channels;

  const Actor* find_actor(std::string_view actor_id) const;
  const Channel* find_channel(std::string_view channel_id) const;
  std::vector<const Channel*> inputs_of(std::string_view actor_id) const;
  std::vector<const Channel*> outputs_of(std::string_view actor_id) const;
  bool is_source(std::string_view actor_id) const { return inputs_of(actor_id).empty(); }
  bool is_sink(std::string_view actor_id) const { return outputs_of(actor_id).empty(); }

  bool operator==(const SdfGraph&) const = default;
};

using RepetitionVector = std::map<std::string, std::int64_t, std::less<>>;

struct TokenState {
  std::map<std::string, std::int64_t, std::less<>> tokens;   // channel -> tokens
  std::map<std::string, std::int64_t, std::less<>> firings;  // actor -> completed firings

  bool operator==(const TokenState&) const = default;
};

TokenState initial_state(const SdfGraph& graph);

ValidationReport validate_graph(const SdfGraph& graph);

/// Smallest positive integer solution of the balance equations, normalized
/// per connected component. Throws InconsistentGraph when none exists.
RepetitionVector repetition_vector(const SdfGraph& graph);

bool can_fire(std::string_view actor, const TokenState& state, const SdfGraph& graph);

/// Atomic firing: consume from every input, produce on every output.
TokenState fire(std::string_view actor, TokenState state, const SdfGraph& graph);

/// True once the initial distribution is restored after k >= 1 whole
/// repetition vectors. A fresh state (zero firings) is not complete.
bool is_iteration_complete(const TokenState& state, const SdfGraph& graph);
bool is_iteration_complete(const TokenState& state, const SdfGraph& graph,
                           const RepetitionVector& q);

}  // namespace sdfmeas
