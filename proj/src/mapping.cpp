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

#include "sdfmeas/mapping.hpp"

#include <set>

namespace sdfmeas {

const StaticOrderSchedule* Mapping::schedule_for(std::string_view tile_id) const {
  for (const auto& s : schedules) {
    if (s.tile_id == tile_id) return &s;
  }
  return nullptr;
}

ValidationReport validate_mapping(const Mapping& m, std::span<const SdfGraph> graphs,
                                  const Platform& p) {
  ValidationReport r;
  const std::string where = "mapping '" + m.id + "': ";

  std::map<std::string_view, const SdfGraph*> actor_graph;
  for (const auto& g : graphs) {
    for (const auto& a : g.actors) actor_graph[a.id] = &g;
  }

  for (const auto& [actor, tile] : m.actor_to_tile) {
    if (!actor_graph.count(actor)) r.add(where + "unknown actor '" + actor + "'");
    if (!p.tile_index(tile)) r.add(where + "actor '" + actor + "' placed on unknown tile '" + tile + "'");
  }
  for (const auto& [actor, graph] : actor_graph) {
    if (!m.actor_to_tile.count(actor)) {
      r.add(where + "actor '" + std::string(actor) + "' is not mapped to a tile");
    }
  }

  std::map<std::string_view, std::int64_t> region_load;
  for (const auto& g : graphs) {
    for (const auto& c : g.channels) {
      auto it = m.channel_to_region.find(c.id);
      if (it == m.channel_to_region.end()) {
        r.add(where + "channel '" + c.id + "' is not mapped to a memory region");
        continue;
      }
      const auto* region = p.find_region(it->second);
      if (!region) {
        r.add(where + "channel '" + c.id + "' mapped to unknown region '" + it->second + "'");
        continue;
      }
      region_load[region->id] += c.capacity * c.token_size;
      auto src = m.actor_to_tile.find(c.src_actor);
      auto dst = m.actor_to_tile.find(c.dst_actor);
      if (src == m.actor_to_tile.end() || dst == m.actor_to_tile.end()) continue;
      if (region->kind == MemoryKind::Private) {
        if (src->second != dst->second) {
          r.add(where + "cross-tile channel '" + c.id + "' mapped to private region '" +
                region->id + "'");
        } else if (auto t = p.tile_index(src->second);
                   t && p.tiles[*t].private_memory.id != region->id) {
          r.add(where + "channel '" + c.id + "' mapped to another tile's private region");
        }
      }
    }
  }
  for (const auto& [region_id, words] : region_load) {
    const auto* region = p.find_region(region_id);
    if (region && words > region->size_words) {
      r.add(where + "region '" + std::string(region_id) + "' overflows (" + std::to_string(words) +
            " > " + std::to_string(region->size_words) + " words)");
    }
  }
  for (const auto& [channel, region] : m.channel_to_region) {
    bool known = false;
    for (const auto& g : graphs) known = known || g.find_channel(channel);
    if (!known) r.add(where + "unknown channel '" + channel + "'");
  }

  std::set<std::string_view> scheduled_tiles;
  std::set<std::string_view> scheduled_actors;
  for (const auto& s : m.schedules) {
    if (!p.tile_index(s.tile_id)) {
      r.add(where + "schedule for unknown tile '" + s.tile_id + "'");
    }
    if (!scheduled_tiles.insert(s.tile_id).second) {
      r.add(where + "more than one schedule for tile '" + s.tile_id + "'");
    }
    if (s.order.empty()) r.add(where + "empty schedule for tile '" + s.tile_id + "'");
    for (const auto& a : s.order) {
      auto it = m.actor_to_tile.find(a);
      if (it == m.actor_to_tile.end() || it->second != s.tile_id) {
        r.add(where + "schedule of tile '" + s.tile_id + "' lists actor '" + a +
              "' that is not mapped to it");
      }
      scheduled_actors.insert(a);
    }
  }
  for (const auto& [actor, tile] : m.actor_to_tile) {
    if (!scheduled_actors.count(actor)) {
      r.add(where + "actor '" + actor + "' is missing from the schedule of tile '" + tile + "'");
    }
  }
  return r;
}

std::vector<Mapping> builtin_mappings(std::span<const SdfGraph> graphs, const Platform& p) {
  using Cells = std::vector<std::vector<std::string>>;
  // One row per mapping, one cell per tile.
  const std::vector<Cells> table = {
      {{"getPixel", "GX"}, {"GY", "ABS"}, {"getMB", "CC"}, {"DCT", "VLC"}},
      {{"getPixel", "getMB"}, {"GX", "CC"}, {"GY", "DCT"}, {"ABS", "VLC"}},
      {{"getPixel", "ABS"}, {"GX", "GY"}, {"getMB", "VLC"}, {"CC", "DCT"}},
      {{"getPixel", "GY"}, {"GX", "ABS"}, {"getMB", "DCT"}, {"CC", "VLC"}},
      {{"getPixel", "CC"}, {"getMB", "GX"}, {"GY", "VLC"}, {"DCT", "ABS"}},
      {{"getPixel", "DCT"}, {"getMB", "GY"}, {"GX", "VLC"}, {"CC", "ABS"}},
      {{"getMB", "CC", "DCT", "VLC"}, {"getPixel", "GX", "GY", "ABS"}, {}, {}},
  };
  if (p.tiles.size() < 4) throw std::invalid_argument("builtin_mappings needs four tiles");
  if (p.shared_memories.empty()) throw std::invalid_argument("builtin_mappings needs a shared memory");

  std::vector<Mapping> out;
  for (std::size_t row = 0; row < table.size(); ++row) {
    Mapping m;
    m.id = "map" + std::to_string(row + 1);
    for (std::size_t t = 0; t < table[row].size(); ++t) {
      const auto& cell = table[row][t];
      if (cell.empty()) continue;
      for (const auto& a : cell) m.actor_to_tile[a] = p.tiles[t].id;
      m.schedules.push_back({p.tiles[t].id, cell});
    }
    for (const auto& g : graphs) {
      for (const auto& c : g.channels) m.channel_to_region[c.id] = p.shared_memories.front().id;
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace sdfmeas
