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

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdfmeas/common.hpp"

namespace sdfmeas {

enum class Arbitration { RoundRobin, FixedPriority };

struct BusSpec {
  Arbitration arbitration = Arbitration::RoundRobin;
  std::int64_t words_per_grant = 1;
  Cycles cycles_per_word = 1;
  Cycles grant_overhead = 0;

  bool operator==(const BusSpec&) const = default;
};

enum class MemoryKind { Private, Shared };

struct MemoryRegion {
  std::string id;
  MemoryKind kind = MemoryKind::Shared;
  std::int64_t size_words = 0;

  bool operator==(const MemoryRegion&) const = default;
};

/// A processor with its private memory and an exclusive trigger link to the
/// measurement controller.
struct Tile {
  std::string id;
  MemoryRegion private_memory;
  bool exclusive_peripheral_link = true;

  bool operator==(const Tile&) const = default;
};

struct Platform {
  std::vector<Tile> tiles;
  std::vector<MemoryRegion> shared_memories;
  BusSpec bus;
  double clock_hz = 100e6;
  Cycles trigger_link_delay = 25;

  std::optional<std::size_t> tile_index(std::string_view tile_id) const;
  const MemoryRegion* find_region(std::string_view region_id) const;

  bool operator==(const Platform&) const = default;
};

ValidationReport validate_platform(const Platform& p);

/// Four tiles P1..P4 with private memories and one shared memory "shm".
Platform quad_core_platform();

/// Bus cycles for one grant carrying `words` words.
Cycles grant_duration(const BusSpec& bus, std::int64_t words);

/// Picks the next tile among `pending` (tile indices, any order).
/// Round-robin takes the first pending index after `last_grant` cyclically;
/// fixed priority takes the lowest index.
std::size_t select_next(std::span<const std::size_t> pending, Arbitration policy,
                        std::optional<std::size_t> last_grant, std::size_t tile_count);

struct BusRequest {
  std::size_t tile = 0;
  Cycles request_cycle = 0;
  std::int64_t words = 1;
};

struct BusGrant {
  std::size_t tile = 0;
  Cycles start = 0;
  Cycles end = 0;
  std::int64_t words = 0;

  bool operator==(const BusGrant&) const = default;
};

/// Replays a set of requests (at most one per tile) on an idle bus and
/// returns every grant in order. Transfers longer than words_per_grant are
/// split and re-arbitrated between grants.
std::vector<BusGrant> arbitrate(std::span<const BusRequest> requests, const BusSpec& bus,
                                std::optional<std::size_t> last_grant);

}  // namespace sdfmeas
