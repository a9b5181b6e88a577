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
 * @file measctrl.hpp
 * @brief Measurement controller: trigger FSM, stopwatch and record buffer.
 *
 *   Idle --start--> Measuring(start_cycle, stops=0)
 *   Measuring --start--> Measuring            (ignored)
 *   Measuring --stop--> Measuring(stops+1)    while stops+1 < required
 *   Measuring --stop--> Idle | Done           on the required stop; one record
 *   Idle --stop--> Idle                       (stray, counted as anomaly)
 *   Done --*--> Done
 *
 * With starts_per_iteration > 0 the controller also tracks overlapping
 * iterations: every starts_per_iteration start triggers open one iteration,
 * every required_stop_count stops close the oldest open one. Stops still
 * owed by iterations opened before the measured start are skipped, so a
 * record always spans a single iteration even when iterations pipeline.
 *
 * The stopwatch shares the processor clock, so durations are exact cycle
 * differences. Draining the buffer is out-of-band and costs no cycles.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sdfmeas/common.hpp"

namespace sdfmeas {

struct ControllerConfig {
  int required_stop_count = 1;
  bool auto_restart = true;
  int num_measurements = 1;
  std::size_t buffer_capacity = 1024;
  int starts_per_iteration = 0;  // 0: no iteration tracking

  bool operator==(const ControllerConfig&) const = default;
};

ValidationReport validate_controller_config(const ControllerConfig& cfg);

struct TimingRecord {
  std::string block_id;
  Cycles start_cycle = 0;
  Cycles end_cycle = 0;
  Cycles duration = 0;

  bool operator==(const TimingRecord&) const = default;
};

enum class ControllerMode { Idle, Measuring, Done };

struct ControllerState {
  ControllerMode mode = ControllerMode::Idle;
  Cycles start_cycle = 0;
  int stops_received = 0;
  int completed = 0;

  bool operator==(const ControllerState&) const = default;
};

class MeasurementController {
 public:
  explicit MeasurementController(std::string block_id = {}) : block_id_(std::move(block_id)) {}

  /// Throws ControllerBusy while Measuring.
  const ControllerState& configure(const ControllerConfig& cfg);

  const ControllerState& on_start(Cycles cycle);

  /// Returns the record completed by this stop, if any. A record that does
  /// not fit the buffer is dropped and counted in overflow_count().
  std::optional<TimingRecord> on_stop(Cycles cycle);

  std::vector<TimingRecord> drain_buffer();

  const ControllerState& state() const { return state_; }
  const ControllerConfig& config() const { return config_; }
  std::size_t buffered() const { return buffer_.size(); }
  std::size_t overflow_count() const { return overflow_; }
  std::size_t stray_stops() const { return stray_stops_; }
  std::size_t ignored_starts() const { return ignored_starts_; }
  /// Stops discarded because they closed an earlier iteration.
  std::size_t skipped_stops() const { return skipped_stops_; }

 private:
  std::string block_id_;
  ControllerConfig config_;
  ControllerState state_;
  std::vector<TimingRecord> buffer_;
  std::size_t overflow_ = 0;
  std::size_t stray_stops_ = 0;
  std::size_t ignored_starts_ = 0;
  std::size_t skipped_stops_ = 0;
  std::int64_t starts_seen_ = 0;
  std::int64_t stops_seen_ = 0;
  std::int64_t skip_ = 0;
};

}  // namespace sdfmeas
