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
 * @file power.hpp
 * @brief Ground-truth power signal and the external sampling board.
 *
 * The signal is piecewise constant over cycles:
 *
 *   P(c) = static + sum over tiles of class_power(tile, c) + bus (if busy)
 *
 * where a tile is Active while computing or executing Delay/Nop/Start/Stop,
 * Polling for the whole span of a Read or Write statement, and Idle otherwise.
 *
 * The sampler observes a window [start + d1, stop + d2] with trigger delays
 * d1, d2 in [0, trigger_delay_cycles]. Samples are taken every
 * clock_hz / sample_rate_hz cycles starting at the window start, perturbed by
 * uniform noise and quantized to adc_bits over full_scale_watts. The reported
 * value of every sample lies within lsb_tolerance LSB of the true value.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sdfmeas/common.hpp"
#include "sdfmeas/simulator.hpp"

namespace sdfmeas {

struct PowerModel {
  double static_watts = 0.48;
  double active_watts = 0.045;   // per tile
  double polling_watts = 0.025;  // per tile
  double bus_watts = 0.02;
  double idle_watts = 0.01;  // per tile

  bool operator==(const PowerModel&) const = default;
};

ValidationReport validate_power_model(const PowerModel& pm);

enum class TriggerDelayMode { Uniform, Fixed };

struct SamplerSpec {
  double sample_rate_hz = 84000.0;
  int adc_bits = 12;
  double lsb_tolerance = 5.0;
  double full_scale_watts = 2.0;
  Cycles trigger_delay_cycles = 25;
  TriggerDelayMode delay_mode = TriggerDelayMode::Uniform;
  Cycles min_block_cycles = 1200;
  std::uint64_t rng_seed = 1;

  double lsb() const;
  bool operator==(const SamplerSpec&) const = default;
};

ValidationReport validate_sampler(const SamplerSpec& s, double clock_hz);

struct PowerSegment {
  Cycles start = 0;  // holds until the next segment's start
  double watts = 0.0;
  bool operator==(const PowerSegment&) const = default;
};

class PowerSignal {
 public:
  PowerSignal() = default;
  /// Segments must start at 0 and be strictly increasing in start.
  PowerSignal(std::vector<PowerSegment> segments, Cycles end);

  static PowerSignal constant(double watts, Cycles end);

  /// Power during cycle c; the last segment extends past end().
  double at(Cycles c) const;
  /// Sum of per-cycle power over [a, b), in watt-cycles.
  double energy(Cycles a, Cycles b) const;
  Cycles end() const { return end_; }
  const std::vector<PowerSegment>& segments() const { return segments_; }

 private:
  std::vector<PowerSegment> segments_;
  Cycles end_ = 0;
};

enum class ActivityClass { Idle, Active, Polling };

/// Class of `kind` while it executes.
ActivityClass classify(StatementKind kind);

/// Requires trace.records (record_statements on).
PowerSignal synthesize_power_signal(const Trace& trace, const PowerModel& pm);

struct PowerSample {
  Cycles cycle = 0;
  std::string rail = "total";
  double watts = 0.0;
  bool operator==(const PowerSample&) const = default;
};

struct PowerStats {
  bool measurable = false;
  double best = 0.0;
  double avg = 0.0;
  double worst = 0.0;
  std::size_t sample_count = 0;

  static PowerStats not_measurable() { return {}; }
  bool operator==(const PowerStats&) const = default;
};

/// Stats over samples; not measurable when empty.
PowerStats stats_of(const std::vector<PowerSample>& samples);

struct BlockMeasurement {
  PowerStats stats;
  Cycles window_start = 0;
  Cycles window_end = 0;
  std::vector<PowerSample> samples;
};

/// Full sampling result of one block. Seed selects the trigger delays and
/// noise; NotMeasurable is decided on the nominal length stop - start.
BlockMeasurement sample_block(const PowerSignal& signal, Cycles start, Cycles stop,
                              const SamplerSpec& sampler, double clock_hz, std::uint64_t seed);

PowerStats measure_block(const PowerSignal& signal, Cycles start, Cycles stop,
                         const SamplerSpec& sampler, double clock_hz);

/// Untriggered sampling of [0, duration); no trigger delay.
BlockMeasurement sample_continuous(const PowerSignal& signal, Cycles duration,
                                   const SamplerSpec& sampler, double clock_hz, std::uint64_t seed);

PowerStats measure_continuous(const PowerSignal& signal, Cycles duration,
                              const SamplerSpec& sampler, double clock_hz);

/// (v_drop / r_shunt) * v_rail.
double shunt_power(double v_drop, double r_shunt, double v_rail);

struct ShuntRail {
  std::string name;
  double r_shunt_ohm = 0.0;
  double v_rail = 0.0;
};

/// Core, auxiliary and I/O rails of the board.
std::vector<ShuntRail> default_rails();

/// Header: cycle,rail,watts
void write_samples_csv(std::ostream& os, const std::vector<PowerSample>& samples);
std::vector<PowerSample> read_samples_csv(std::istream& is);

}  // namespace sdfmeas
