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

#include "sdfmeas/platform.hpp"

#include <algorithm>
#include <set>

namespace sdfmeas {

std::optional<std::size_t> Platform::tile_index(std::string_view tile_id) const {
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    if (tiles[i].id == tile_id) return i;
  }
  return std::nullopt;
}

const MemoryRegion* Platform::find_region(std::string_view region_id) const {
  for (const auto& t : tiles) {
    if (t.private_memory.id == region_id) return &t.private_memory;
  }
  for (const auto& m : shared_memories) {
    if (m.id == region_id) return &m;
  }
  return nullptr;
}

ValidationReport validate_platform(const Platform& p) {
  ValidationReport r;
  if (p.tiles.empty()) r.add("platform has no tiles");
  if (!(p.clock_hz > 0)) r.add("clock_hz must be positive");
  if (p.trigger_link_delay < 0) r.add("trigger_link_delay must be >= 0");
  if (p.bus.words_per_grant < 1) r.add("bus words_per_grant must be >= 1");
  if (p.bus.cycles_per_word < 0 || p.bus.grant_overhead < 0) r.add("bus cycle costs must be >= 0");

  std::set<std::string_view> tile_ids;
  std::set<std::string_view> region_ids;
  auto check_region = [&](const MemoryRegion& m, MemoryKind expected) {
    if (m.id.empty()) r.add("memory region with empty id");
    if (!region_ids.insert(m.id).second) r.add("duplicate region id '" + m.id + "'");
    if (m.size_words <= 0) r.add("region '" + m.id + "': size_words must be positive");
    if (m.kind != expected) r.add("region '" + m.id + "': wrong memory kind");
  };
  for (const auto& t : p.tiles) {
    if (t.id.empty()) r.add("tile with empty id");
    if (!tile_ids.insert(t.id).second) r.add("duplicate tile id '" + t.id + "'");
    if (!t.exclusive_peripheral_link) r.add("tile '" + t.id + "': trigger link must be exclusive");
    check_region(t.private_memory, MemoryKind::Private);
  }
  for (const auto& m : p.shared_memories) check_region(m, MemoryKind::Shared);
  return r;
}

Platform quad_core_platform() {
  Platform p;
  for (int i = 1; i <= 4; ++i) {
    const auto id = "P" + std::to_string(i);
    p.tiles.push_back({id, {id + "_mem", MemoryKind::Private, 1 << 16}, true});
  }
  p.shared_memories.push_back({"shm", MemoryKind::Shared, 1 << 20});
  return p;
}

Cycles grant_duration(const BusSpec& bus, std::int64_t words) {
  return bus.grant_overhead + words * bus.cycles_per_word;
}

std::size_t select_next(std::span<const std::size_t> pending, Arbitration policy,
                        std::optional<std::size_t> last_grant, std::size_t tile_count) {
  if (pending.empty()) throw std::invalid_argument("select_next: no pending requests");
  if (policy == Arbitration::FixedPriority || !last_grant) {
    return *std::min_element(pending.begin(), pending.end());
  }
  const auto n = std::max<std::size_t>(tile_count, 1);
  auto distance = [&](std::size_t t) { return (t + n - *last_grant - 1) % n; };
  return *std::min_element(pending.begin(), pending.end(),
                           [&](auto a, auto b) { return distance(a) < distance(b); });
}

std::vector<BusGrant> arbitrate(std::span<const BusRequest> requests, const BusSpec& bus,
                                std::optional<std::size_t> last_grant) {
  struct Open {
    std::size_t tile;
    Cycles since;
    std::int64_t words;
  };
  std::vector<Open> open;
  std::size_t tile_count = 0;
  std::set<std::size_t> seen;
  for (const auto& r : requests) {
    if (!seen.insert(r.tile).second) {
      throw std::invalid_argument("arbitrate: more than one request per tile");
    }
    open.push_back({r.tile, r.request_cycle, std::max<std::int64_t>(r.words, 0)});
    tile_count = std::max(tile_count, r.tile + 1);
  }

  std::vector<BusGrant> grants;
  Cycles now = open.empty() ? 0 : std::min_element(open.begin(), open.end(), [](auto& a, auto& b) {
                                      return a.since < b.since;
                                    })->since;
  while (!open.empty()) {
    std::vector<std::size_t> ready;
    for (const auto& o : open) {
      if (o.since <= now) ready.push_back(o.tile);
    }
    if (ready.empty()) {
      now = std::min_element(open.begin(), open.end(), [](auto& a, auto& b) {
              return a.since < b.since;
            })->since;
      continue;
    }
    const auto winner = select_next(ready, bus.arbitration, last_grant, tile_count);
    auto it = std::find_if(open.begin(), open.end(), [&](auto& o) { return o.tile == winner; });
    const auto chunk = std::min(it->words, bus.words_per_grant);
    const auto end = now + grant_duration(bus, chunk);
    grants.push_back({winner, now, end, chunk});
    last_grant = winner;
    it->words -= chunk;
    if (it->words <= 0) open.erase(it);
    now = end;
  }
  return grants;
}

}  // namespace sdfmeas
