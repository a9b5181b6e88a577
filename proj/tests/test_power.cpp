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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "sdfmeas/power.hpp"

namespace sdfmeas {
namespace {

Trace empty_trace(Cycles end) {
  Trace t;
  t.tile_ids = {"P1", "P2", "P3", "P4"};
  t.end_cycle = end;
  return t;
}

TEST(PowerModel, Validation) {
  PowerModel pm;
  EXPECT_TRUE(validate_power_model(pm).ok());
  pm.polling_watts = 1.0;
  EXPECT_FALSE(validate_power_model(pm).ok());
}

TEST(Sampler, Validation) {
  SamplerSpec s;
  EXPECT_TRUE(validate_sampler(s, 100e6).ok());
  s.min_block_cycles = 1000;  // below one sample period at 84 kHz
  EXPECT_FALSE(validate_sampler(s, 100e6).ok());
  EXPECT_DOUBLE_EQ(SamplerSpec{}.lsb(), 2.0 / 4096.0);
}

TEST(Synthesize, IdleAndActive) {
  PowerModel pm;
  auto idle = synthesize_power_signal(empty_trace(100), pm);
  EXPECT_DOUBLE_EQ(idle.at(50), pm.static_watts + 4 * pm.idle_watts);

  auto t = empty_trace(100);
  t.records.push_back({0, 0, StatementKind::Compute, "A", 10, 60});
  auto sig = synthesize_power_signal(t, pm);
  EXPECT_DOUBLE_EQ(sig.at(5), pm.static_watts + 4 * pm.idle_watts);
  EXPECT_DOUBLE_EQ(sig.at(10), pm.static_watts + pm.active_watts + 3 * pm.idle_watts);
  EXPECT_DOUBLE_EQ(sig.at(60), pm.static_watts + 4 * pm.idle_watts);
}

TEST(Synthesize, ClassesAndBus) {
  EXPECT_EQ(classify(StatementKind::Read), ActivityClass::Polling);
  EXPECT_EQ(classify(StatementKind::Write), ActivityClass::Polling);
  EXPECT_EQ(classify(StatementKind::Delay), ActivityClass::Active);
  PowerModel pm;
  auto t = empty_trace(50);
  t.records.push_back({1, 0, StatementKind::Read, "c", 0, 20});
  t.bus_busy.push_back({5, 8});
  auto sig = synthesize_power_signal(t, pm);
  EXPECT_DOUBLE_EQ(sig.at(6), pm.static_watts + pm.polling_watts + 3 * pm.idle_watts + pm.bus_watts);
  EXPECT_DOUBLE_EQ(sig.at(9), pm.static_watts + pm.polling_watts + 3 * pm.idle_watts);
}

TEST(Synthesize, EnergyMatchesOccupancyAccounting) {
  std::mt19937_64 rng(5);
  const PowerModel pm;
  const StatementKind kinds[] = {StatementKind::Read, StatementKind::Compute, StatementKind::Write,
                                 StatementKind::Delay};
  for (int trial = 0; trial < 50; ++trial) {
    auto t = empty_trace(400);
    for (std::size_t tile = 0; tile < 4; ++tile) {
      Cycles c = std::uniform_int_distribution<Cycles>(0, 20)(rng);
      while (c < 380) {
        const Cycles len = std::uniform_int_distribution<Cycles>(1, 40)(rng);
        t.records.push_back({tile, 0, kinds[rng() % 4], "", c, std::min<Cycles>(c + len, 400)});
        c += len + std::uniform_int_distribution<Cycles>(0, 15)(rng);
      }
    }
    Cycles b = 0;
    while (b < 380) {
      const Cycles s = b + std::uniform_int_distribution<Cycles>(1, 30)(rng);
      const Cycles e = s + std::uniform_int_distribution<Cycles>(1, 20)(rng);
      t.bus_busy.push_back({s, e});
      b = e;
    }
    const auto sig = synthesize_power_signal(t, pm);
    const Cycles a = std::uniform_int_distribution<Cycles>(0, 200)(rng);
    const Cycles z = std::uniform_int_distribution<Cycles>(a, 400)(rng);
    double expected = 0.0;
    for (Cycles c = a; c < z; ++c) {
      int active = 0, polling = 0;
      for (const auto& r : t.records) {
        if (r.start <= c && c < r.end) {
          (r.kind == StatementKind::Read || r.kind == StatementKind::Write ? polling : active)++;
        }
      }
      bool bus = false;
      for (const auto& iv : t.bus_busy) bus |= iv.start <= c && c < iv.end;
      expected += pm.static_watts + active * pm.active_watts + polling * pm.polling_watts +
                  (4 - active - polling) * pm.idle_watts + (bus ? pm.bus_watts : 0.0);
    }
    EXPECT_NEAR(sig.energy(a, z), expected, 1e-9 * std::max(1.0, expected));
  }
}

TEST(MeasureBlock, Floor) {
  const SamplerSpec s;
  const auto sig = PowerSignal::constant(0.6, 1'000'000);
  EXPECT_FALSE(measure_block(sig, 1000, 1285, s, 100e6).measurable);
  EXPECT_FALSE(measure_block(sig, 1000, 2199, s, 100e6).measurable);
  auto ok = measure_block(sig, 1000, 2200, s, 100e6);
  EXPECT_TRUE(ok.measurable);
  EXPECT_GE(ok.sample_count, 1u);
}

TEST(MeasureBlock, ConstantZeroTolerance) {
  SamplerSpec s;
  s.lsb_tolerance = 0.0;
  const auto sig = PowerSignal::constant(0.5, 1'000'000);
  auto st = measure_block(sig, 0, 50'000, s, 100e6);
  ASSERT_TRUE(st.measurable);
  EXPECT_EQ(st.best, 0.5);
  EXPECT_EQ(st.avg, 0.5);
  EXPECT_EQ(st.worst, 0.5);
}

TEST(MeasureBlock, WindowShiftAndReproducibility) {
  SamplerSpec s;
  const auto sig = PowerSignal::constant(0.7, 1'000'000);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto m = sample_block(sig, 1000, 9000, s, 100e6, seed);
    EXPECT_GE(m.window_start, 1000);
    EXPECT_LE(m.window_start, 1025);
    EXPECT_GE(m.window_end, 9000);
    EXPECT_LE(m.window_end, 9025);
    auto again = sample_block(sig, 1000, 9000, s, 100e6, seed);
    EXPECT_EQ(m.samples, again.samples);
  }
  s.delay_mode = TriggerDelayMode::Fixed;
  auto fixed = sample_block(sig, 1000, 9000, s, 100e6, 3);
  EXPECT_EQ(fixed.window_start, 1025);
  EXPECT_EQ(fixed.window_end, 9025);
}

TEST(MeasureContinuous, ConstantAndDuty) {
  const SamplerSpec s;
  auto c = measure_continuous(PowerSignal::constant(0.9, 2'000'000), 2'000'000, s, 100e6);
  EXPECT_NEAR(c.avg, 0.9, s.lsb());

  // 50/50 duty cycle with a period that is not commensurate with sampling.
  std::vector<PowerSegment> segs;
  for (Cycles k = 0; k < 2000; ++k) segs.push_back({k * 1000, k % 2 == 0 ? 0.5 : 1.0});
  auto duty = measure_continuous(PowerSignal(segs, 2'000'000), 2'000'000, s, 100e6);
  EXPECT_NEAR(duty.avg, 0.75, 0.75 * 0.02);

  EXPECT_THROW(measure_continuous(PowerSignal::constant(1, 100), 100, s, 100e6), InvalidWindow);
}

TEST(Shunt, Arithmetic) {
  EXPECT_DOUBLE_EQ(shunt_power(0.0, 0.01, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(shunt_power(0.01, 0.01, 1.0), 1.0);
  EXPECT_THROW(shunt_power(0.01, 0.0, 1.0), NonPositiveShunt);
  auto rails = default_rails();
  ASSERT_EQ(rails.size(), 3u);
  EXPECT_DOUBLE_EQ(rails[0].r_shunt_ohm, 0.010);
  EXPECT_DOUBLE_EQ(rails[1].r_shunt_ohm, 0.020);
  EXPECT_DOUBLE_EQ(rails[2].r_shunt_ohm, 0.020);
}

TEST(Samples, CsvRoundTrip) {
  std::vector<PowerSample> in{{10, "total", 0.1}, {850, "vccint", 0.123456789012345}, {2000, "total", 1.0 / 3.0}};
  std::stringstream ss;
  write_samples_csv(ss, in);
  EXPECT_EQ(read_samples_csv(ss), in);
  std::istringstream bad("cycle,rails,watts\n1,total,0.5\n");
  try {
    read_samples_csv(bad);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("rails"), std::string::npos);
  }
}

TEST(Stats, OfSamples) {
  EXPECT_FALSE(stats_of({}).measurable);
  auto st = stats_of({{0, "total", 1.0}, {1, "total", 3.0}});
  EXPECT_TRUE(st.measurable);
  EXPECT_EQ(st.best, 1.0);
  EXPECT_EQ(st.avg, 2.0);
  EXPECT_EQ(st.worst, 3.0);
  EXPECT_EQ(st.sample_count, 2u);
}

}  // namespace
}  // namespace sdfmeas
