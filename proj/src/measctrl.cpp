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

#include "sdfmeas/measctrl.hpp"

#include <algorithm>

namespace sdfmeas {

ValidationReport validate_controller_config(const ControllerConfig& cfg) {
  ValidationReport r;
  if (cfg.required_stop_count < 1) r.add("required_stop_count must be >= 1");
  if (cfg.num_measurements < 1) r.add("num_measurements must be >= 1");
  if (cfg.buffer_capacity < 1) r.add("buffer_capacity must be >= 1");
  if (cfg.starts_per_iteration < 0) r.add("starts_per_iteration must be >= 0");
  return r;
}

const ControllerState& MeasurementController::configure(const ControllerConfig& cfg) {
  if (state_.mode == ControllerMode::Measuring) {
    throw ControllerBusy("cannot configure the measurement controller while measuring");
  }
  if (auto r = validate_controller_config(cfg); !r.ok()) throw ValidationError(r);
  config_ = cfg;
  state_ = ControllerState{};
  starts_seen_ = stops_seen_ = skip_ = 0;
  return state_;
}

const ControllerState& MeasurementController::on_start(Cycles cycle) {
  const std::int64_t index = starts_seen_++;
  if (state_.mode == ControllerMode::Idle) {
    state_.mode = ControllerMode::Measuring;
    state_.start_cycle = cycle;
    state_.stops_received = 0;
    if (config_.starts_per_iteration > 0) {
      const std::int64_t iteration = index / config_.starts_per_iteration;
      skip_ = std::max<std::int64_t>(0, iteration * config_.required_stop_count - stops_seen_);
    }
  } else {
    ++ignored_starts_;
  }
  return state_;
}

std::optional<TimingRecord> MeasurementController::on_stop(Cycles cycle) {
  ++stops_seen_;
  if (state_.mode == ControllerMode::Measuring && skip_ > 0) {
    --skip_;
    ++skipped_stops_;
    return std::nullopt;
  }
  if (state_.mode != ControllerMode::Measuring) {
    if (state_.mode == ControllerMode::Idle) ++stray_stops_;
    return std::nullopt;
  }
  if (++state_.stops_received < config_.required_stop_count) return std::nullopt;

  TimingRecord rec{block_id_, state_.start_cycle, cycle, cycle - state_.start_cycle};
  ++state_.completed;
  if (buffer_.size() < config_.buffer_capacity) {
    buffer_.push_back(rec);
  } else {
    ++overflow_;
  }
  state_.stops_received = 0;
  state_.mode = (config_.auto_restart && state_.completed < config_.num_measurements)
                    ? ControllerMode::Idle
                    : ControllerMode::Done;
  return rec;
}

std::vector<TimingRecord> MeasurementController::drain_buffer() {
  std::vector<TimingRecord> out;
  out.swap(buffer_);
  return out;
}

}  // namespace sdfmeas
