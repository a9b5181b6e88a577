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
 * @file analysis.hpp
 * @brief Best/avg/worst aggregation over repetitions and Pareto filtering.
 */

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdfmeas/measctrl.hpp"
#include "sdfmeas/power.hpp"

namespace sdfmeas {

struct PowerSummary {
  double best = 0.0;
  double avg = 0.0;
  double worst = 0.0;
  bool operator==(const PowerSummary&) const = default;
};

struct MeasurementSummary {
  std::string block_id;
  Cycles t_best = 0;
  double t_avg = 0.0;
  Cycles t_worst = 0;
  std::optional<PowerSummary> power;  // nullopt: not measurable
  std::size_t repetitions = 0;

  bool operator==(const MeasurementSummary&) const = default;
};

/// Timing min/mean/max over records. Power: min of bests, mean of averages and
/// max of worsts over the measurable repetitions; nullopt iff none is.
MeasurementSummary aggregate(std::span<const TimingRecord> records, std::span<const PowerStats> power);

struct ParetoPoint {
  std::string mapping_id;
  std::string graph_id;
  double latency = 0.0;  // cycles per iteration
  double power = 0.0;    // watts

  bool operator==(const ParetoPoint&) const = default;
};

/// a is no worse in both objectives and strictly better in one.
bool dominates(const ParetoPoint& a, const ParetoPoint& b);

/// Non-dominated flags, one per input point. All-pairs check, OpenMP over points.
std::vector<char> pareto_mask(std::span<const ParetoPoint> points);
/// Same result by a single-threaded sort and sweep.
std::vector<char> pareto_mask_serial(std::span<const ParetoPoint> points);

/// Non-dominated points, stable-sorted by mapping_id.
std::vector<ParetoPoint> pareto_front(std::span<const ParetoPoint> points);
std::vector<ParetoPoint> pareto_front_serial(std::span<const ParetoPoint> points);

}  // namespace sdfmeas
