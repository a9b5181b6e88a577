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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "sdfmeas/platform.hpp"
#include "sdfmeas/sdf.hpp"

namespace sdfmeas {

/// Cyclic firing order of the actors placed on one tile. A tile never skips
/// ahead: when the next actor cannot proceed, the tile polls.
struct StaticOrderSchedule {
  std::string tile_id;
  std::vector<std::string> order;

  bool operator==(const StaticOrderSchedule&) const = default;
};

struct Mapping {
  std::string id;
  std::map<std::string, std::string, std::less<>> actor_to_tile;
  std::map<std::string, std::string, std::less<>> channel_to_region;
  std::vector<StaticOrderSchedule> schedules;

  const StaticOrderSchedule* schedule_for(std::string_view tile_id) const;

  bool operator==(const Mapping&) const = default;
};

ValidationReport validate_mapping(const Mapping& m, std::span<const SdfGraph> graphs,
                                  const Platform& p);

/// The seven Sobel/JPEG placements used for mapping exploration. Cell order
/// top-to-bottom is the static firing order; every channel goes to the first
/// shared memory. Expects actors getPixel, GX, GY, ABS and getMB, CC, DCT,
/// VLC, and at least four tiles.
std::vector<Mapping> builtin_mappings(std::span<const SdfGraph> graphs, const Platform& p);

}  // namespace sdfmeas
