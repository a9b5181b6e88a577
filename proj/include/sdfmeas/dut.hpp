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
 * @file dut.hpp
 * @brief Device-under-test description: graphs, platform, mappings and the
 * cost, power and sampler models, read from XML or JSON.
 *
 * Both formats share one element tree. XML attributes become JSON keys and
 * repeated child elements become arrays named by the plural of the tag:
 *
 *   <dut seed granularity repetitions control_cost>
 *     <graph id> <actor id [cycles | best avg worst mode]/>
 *                <channel id src dst produce consume initial_tokens capacity token_size/>
 *     <platform clock_hz trigger_link_delay>
 *       <bus arbitration words_per_grant cycles_per_word grant_overhead/>
 *       <tile id memory memory_words/> <shared_memory id size_words/>
 *     <mapping id> <place actor tile/> <route channel region/>
 *                  <schedule tile> <fire actor/> ...
 *     <cost_model/> <power_model/> <sampler/>
 *
 * See docs/dut_format.md for every key and its default.
 */

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sdfmeas/instrument.hpp"
#include "sdfmeas/mapping.hpp"
#include "sdfmeas/platform.hpp"
#include "sdfmeas/power.hpp"
#include "sdfmeas/sdf.hpp"
#include "sdfmeas/simulator.hpp"

namespace sdfmeas {

struct DutDescription {
  std::vector<SdfGraph> graphs;
  Platform platform;
  std::vector<Mapping> mappings;
  CostModel cost_model;
  PowerModel power_model;
  SamplerSpec sampler;
  Granularity granularity = Granularity::Phase;
  int repetitions = 10;
  std::uint64_t seed = 1;
  Cycles control_cost = 2;

  const Mapping* find_mapping(std::string_view id) const;
  bool operator==(const DutDescription&) const = default;
};

/// Aggregates graph, platform, mapping, model and top-level checks.
ValidationReport validate_dut(const DutDescription& dut);

/// Throws ParseError on malformed input; does not validate.
DutDescription parse_dut_json(std::string_view text);
DutDescription parse_dut_xml(std::string_view text);

std::string dut_to_json(const DutDescription& dut);
std::string dut_to_xml(const DutDescription& dut);

/// Format by extension (.xml or .json). Throws IoError, ParseError or
/// ValidationError.
DutDescription load_dut(const std::filesystem::path& path);
void save_dut(const std::filesystem::path& path, const DutDescription& dut);

}  // namespace sdfmeas
