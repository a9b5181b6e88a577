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

#include "sdfmeas/power.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "csv.hpp"

namespace sdfmeas {

ValidationReport validate_power_model(const PowerModel& pm) {
  ValidationReport r;
  if (pm.static_watts < 0 || pm.active_watts < 0 || pm.polling_watts < 0 || pm.bus_watts < 0 ||
      pm.idle_watts < 0) {
    r.add("power model values must be >= 0");
  }
  if (pm.polling_watts > pm.active_watts) r.add("polling power must not exceed active power");
  return r;
}

double SamplerSpec::lsb() const { return full_scale_watts / std::ldexp(1.0, adc_bits); }

ValidationReport validate_sampler(const SamplerSpec& s, double clock_hz) {
  ValidationReport r;
  if (!(s.sample_rate_hz > 0)) r.add("sample_rate_hz must be > 0");
  if (s.adc_bits < 1 || s.adc_bits > 30) r.add("adc_bits must be in [1, 30]");
  if (s.lsb_tolerance < 0) r.add("lsb_tolerance must be >= 0");
  if (!(s.full_scale_watts > 0)) r.add("full_scale_watts must be > 0");
  if (s.trigger_delay_cycles < 0) r.add("trigger_delay_cycles must be >= 0");
  if (!(clock_hz > 0)) {
    r.add("clock_hz must be > 0");
  } else if (s.sample_rate_hz > 0) {
    const auto floor = static_cast<Cycles>(std::ceil(clock_hz / s.sample_rate_hz));
    if (s.min_block_cycles < floor) {
      r.add("min_block_cycles must be >= " + std::to_string(floor) + " (one sample period)");
    }
  }
  return r;
}

PowerSignal::PowerSignal(std::vector<PowerSegment> segments, Cycles end)
    : segments_(std::move(segments)), end_(end) {
  if (segments_.empty() || segments_.front().start != 0) {
    throw std::invalid_argument("power signal must start at cycle 0");
  }
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    if (segments_[i].start <= segments_[i - 1].start) {
      throw std::invalid_argument("power signal segments must be strictly increasing");
    }
  }
}

PowerSignal PowerSignal::constant(double watts, Cycles end) { return PowerSignal({{0, watts}}, end); }

double PowerSignal::at(Cycles c) const {
  if (segments_.empty()) return 0.0;
  auto it = std::upper_bound(segments_.begin(), segments_.end(), c,
                             [](Cycles v, const PowerSegment& s) { return v < s.start; });
  if (it == segments_.begin()) return segments_.front().watts;
  return std::prev(it)->watts;
}

double PowerSignal::energy(Cycles a, Cycles b) const {
  if (b <= a || segments_.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const Cycles s = std::max(a, segments_[i].start);
    const Cycles e = std::min(b, i + 1 < segments_.size() ? segments_[i + 1].start : kNever);
    if (e > s) sum += static_cast<double>(e - s) * segments_[i].watts;
  }
  if (a < 0) sum += static_cast<double>(std::min<Cycles>(b, 0) - a) * segments_.front().watts;
  return sum;
}

ActivityClass classify(StatementKind kind) {
  switch (kind) {
    case StatementKind::Read:
    case StatementKind::Write: return ActivityClass::Polling;
    default: return ActivityClass::Active;
  }
}

PowerSignal synthesize_power_signal(const Trace& trace, const PowerModel& pm) {
  // Count tiles per class at every change point; recomputing from counts keeps
  // the value exact instead of accumulating floating-point deltas.
  struct Event {
    Cycles cycle;
    int active, polling, bus;
  };
  std::vector<Event> events;
  events.reserve(2 * trace.records.size() + 2 * trace.bus_busy.size());
  for (const auto& r : trace.records) {
    if (r.end <= r.start) continue;
    const bool polling = classify(r.kind) == ActivityClass::Polling;
    events.push_back({r.start, polling ? 0 : 1, polling ? 1 : 0, 0});
    events.push_back({r.end, polling ? 0 : -1, polling ? -1 : 0, 0});
  }
  for (const auto& b : trace.bus_busy) {
    events.push_back({b.start, 0, 0, 1});
    events.push_back({b.end, 0, 0, -1});
  }
  std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.cycle < b.cycle; });

  const int tiles = static_cast<int>(trace.tile_ids.size());
  auto watts = [&](int active, int polling, int bus) {
    return pm.static_watts + active * pm.active_watts + polling * pm.polling_watts +
           (tiles - active - polling) * pm.idle_watts + (bus > 0 ? pm.bus_watts : 0.0);
  };

  std::vector<PowerSegment> segments{{0, watts(0, 0, 0)}};
  int active = 0, polling = 0, bus = 0;
  for (std::size_t i = 0; i < events.size();) {
    const Cycles c = events[i].cycle;
    for (; i < events.size() && events[i].cycle == c; ++i) {
      active += events[i].active;
      polling += events[i].polling;
      bus += events[i].bus;
    }
    const double w = watts(active, polling, bus);
    if (c == 0) {
      segments.front().watts = w;
    } else if (w != segments.back().watts) {
      segments.push_back({c, w});
    }
  }
  return PowerSignal(std::move(segments), trace.end_cycle);
}

PowerStats stats_of(const std::vector<PowerSample>& samples) {
  if (samples.empty()) return PowerStats::not_measurable();
  PowerStats s;
  s.measurable = true;
  s.best = samples.front().watts;
  s.worst = samples.front().watts;
  double sum = 0.0;
  for (const auto& p : samples) {
    s.best = std::min(s.best, p.watts);
    s.worst = std::max(s.worst, p.watts);
    sum += p.watts;
  }
  s.avg = std::clamp(sum / static_cast<double>(samples.size()), s.best, s.worst);
  s.sample_count = samples.size();
  return s;
}

namespace {

std::vector<PowerSample> take_samples(const PowerSignal& signal, Cycles ws, Cycles we,
                                      const SamplerSpec& sampler, double clock_hz, std::mt19937_64& rng) {
  const double period = clock_hz / sampler.sample_rate_hz;
  const double lsb = sampler.lsb();
  const double max_code = std::ldexp(1.0, sampler.adc_bits) - 1.0;
  // Noise of (t - 1/2) LSB plus the half-LSB rounding keeps every sample within t LSB.
  const double noise_span = std::max(0.0, sampler.lsb_tolerance - 0.5) * lsb;
  std::uniform_real_distribution<double> noise(-noise_span, noise_span);

  std::vector<PowerSample> out;
  for (std::int64_t k = 0;; ++k) {
    const auto cycle = ws + static_cast<Cycles>(std::floor(static_cast<double>(k) * period));
    if (cycle > we) break;
    const double truth = signal.at(cycle);
    const double perturbed = truth + (noise_span > 0 ? noise(rng) : 0.0);
    const double code = std::clamp(std::round(perturbed / lsb), 0.0, max_code);
    out.push_back({cycle, "total", code * lsb});
  }
  return out;
}

}  // namespace

BlockMeasurement sample_block(const PowerSignal& signal, Cycles start, Cycles stop,
                              const SamplerSpec& sampler, double clock_hz, std::uint64_t seed) {
  if (start < 0 || stop < start) {
    throw InvalidWindow("invalid power window [" + std::to_string(start) + ", " + std::to_string(stop) + "]");
  }
  if (auto r = validate_sampler(sampler, clock_hz); !r.ok()) throw ValidationError(r);
  std::mt19937_64 rng(seed);
  auto delay = [&]() -> Cycles {
    if (sampler.delay_mode == TriggerDelayMode::Fixed) return sampler.trigger_delay_cycles;
    return std::uniform_int_distribution<Cycles>(0, sampler.trigger_delay_cycles)(rng);
  };
  BlockMeasurement m;
  m.window_start = start + delay();
  m.window_end = std::max(stop + delay(), m.window_start);
  if (stop - start < sampler.min_block_cycles) return m;
  m.samples = take_samples(signal, m.window_start, m.window_end, sampler, clock_hz, rng);
  m.stats = stats_of(m.samples);
  return m;
}

PowerStats measure_block(const PowerSignal& signal, Cycles start, Cycles stop,
                         const SamplerSpec& sampler, double clock_hz) {
  return sample_block(signal, start, stop, sampler, clock_hz, sampler.rng_seed).stats;
}

BlockMeasurement sample_continuous(const PowerSignal& signal, Cycles duration,
                                   const SamplerSpec& sampler, double clock_hz, std::uint64_t seed) {
  if (duration < sampler.min_block_cycles) {
    throw InvalidWindow("continuous measurement of " + std::to_string(duration) +
                        " cycles is shorter than the " + std::to_string(sampler.min_block_cycles) +
                        "-cycle floor");
  }
  if (auto r = validate_sampler(sampler, clock_hz); !r.ok()) throw ValidationError(r);
  std::mt19937_64 rng(seed);
  BlockMeasurement m;
  m.window_start = 0;
  m.window_end = duration - 1;
  m.samples = take_samples(signal, 0, duration - 1, sampler, clock_hz, rng);
  m.stats = stats_of(m.samples);
  return m;
}

PowerStats measure_continuous(const PowerSignal& signal, Cycles duration, const SamplerSpec& sampler,
                              double clock_hz) {
  return sample_continuous(signal, duration, sampler, clock_hz, sampler.rng_seed).stats;
}

double shunt_power(double v_drop, double r_shunt, double v_rail) {
  if (!(r_shunt > 0)) throw NonPositiveShunt("shunt resistance must be > 0");
  return v_drop / r_shunt * v_rail;
}

std::vector<ShuntRail> default_rails() {
  return {{"vccint", 0.010, 1.0}, {"vccaux", 0.020, 2.5}, {"vcco", 0.020, 3.3}};
}

void write_samples_csv(std::ostream& os, const std::vector<PowerSample>& samples) {
  os << "cycle,rail,watts\n";
  for (const auto& s : samples) os << s.cycle << ',' << s.rail << ',' << format_double(s.watts) << '\n';
}

std::vector<PowerSample> read_samples_csv(std::istream& is) {
  const auto t = csv::read(is, {"cycle", "rail", "watts"});
  std::vector<PowerSample> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out.push_back({csv::to_int(t, r, 0), t.rows[r][1], csv::to_double(t, r, 2)});
  }
  return out;
}

}  // namespace sdfmeas
