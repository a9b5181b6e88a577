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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdfmeas/experiment.hpp"

namespace sdfmeas {
namespace {

const std::filesystem::path kData = SDFMEAS_DATA_DIR;

SweepOptions quick(int reps, SweepMode mode = SweepMode::Parallel) {
  SweepOptions o;
  o.repetitions = reps;
  o.seed = 7;
  o.mode = mode;
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Analyze, ScenarioCountMatchesEnumeration) {
  const auto dut = load_dut(kData / "sobel_quad.xml");
  const auto& m = dut.mappings[0];
  for (auto level : {Granularity::Phase, Granularity::Actor, Granularity::Sdfg}) {
    auto ip = annotate(m, dut.graphs, Granularity::Phase, dut.control_cost);
    const auto expected = enumerate_scenarios(ip, dut.graphs, m, level).size();
    auto r = run_analyze(dut, m, level, quick(3));
    EXPECT_EQ(r.summaries.size(), expected);
    EXPECT_EQ(r.results.size(), expected);
    for (const auto& res : r.results) EXPECT_EQ(res.timing.size(), 3u) << res.scenario_id;
  }
}

TEST(Analyze, SerialEqualsParallel) {
  const auto dut = load_dut(kData / "sobel_quad.xml");
  auto a = run_analyze(dut, dut.mappings[0], Granularity::Phase, quick(4, SweepMode::Serial));
  auto b = run_analyze(dut, dut.mappings[0], Granularity::Phase, quick(4, SweepMode::Parallel));
  EXPECT_EQ(a.summaries, b.summaries);
  for (std::size_t i = 0; i < a.results.size(); ++i) EXPECT_EQ(a.results[i].samples, b.results[i].samples);
}

TEST(Analyze, PhaseTableShape) {
  const auto dut = load_dut(kData / "sobel_quad.xml");
  auto r = run_analyze(dut, dut.mappings[0], Granularity::Phase, quick(5));
  ASSERT_EQ(r.summaries.size(), 10u);
  std::vector<std::string> na;
  for (const auto& s : r.summaries) {
    if (!s.power) na.push_back(s.block_id);
  }
  EXPECT_EQ(na, (std::vector<std::string>{"GX.write", "GY.write", "ABS.compute"}));
}

TEST(Import, ReproducesSimulatedSummaries) {
  const auto dut = load_dut(kData / "sobel_quad.xml");
  auto r = run_analyze(dut, dut.mappings[0], Granularity::Phase, quick(5));
  for (const auto& res : r.results) {
    std::vector<PowerSample> samples;
    for (const auto& s : res.samples) samples.insert(samples.end(), s.begin(), s.end());
    auto imported = import_measurements(res.timing, samples, dut.sampler);
    ASSERT_EQ(imported.size(), 1u);
    ASSERT_TRUE(res.summary.has_value());
    EXPECT_EQ(imported[0].t_best, res.summary->t_best) << res.scenario_id;
    EXPECT_EQ(imported[0].t_worst, res.summary->t_worst);
    EXPECT_EQ(imported[0].t_avg, res.summary->t_avg);
    EXPECT_EQ(imported[0].power.has_value(), res.summary->power.has_value()) << res.scenario_id;
    if (imported[0].power) {
      EXPECT_DOUBLE_EQ(imported[0].power->best, res.summary->power->best);
      EXPECT_DOUBLE_EQ(imported[0].power->avg, res.summary->power->avg);
      EXPECT_DOUBLE_EQ(imported[0].power->worst, res.summary->power->worst);
    }
  }
}

TEST(Import, TimingOnlyHasNoPower) {
  std::vector<TimingRecord> t{{"blk", 0, 5000, 5000}, {"blk", 9000, 15000, 6000}};
  auto s = import_measurements(t, {}, SamplerSpec{});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_FALSE(s[0].power.has_value());
  EXPECT_EQ(s[0].t_avg, 5500.0);
}

TEST(Import, RailsAreSummed) {
  std::vector<TimingRecord> t{{"blk", 0, 5000, 5000}};
  std::vector<PowerSample> p{{100, "vccint", 0.25}, {100, "vccaux", 0.5}, {6000, "vccint", 9.0}};
  auto s = import_measurements(t, p, SamplerSpec{});
  ASSERT_TRUE(s[0].power.has_value());
  EXPECT_DOUBLE_EQ(s[0].power->avg, 0.75);
}

TEST(System, ContinuousRun) {
  const auto dut = load_dut(kData / "sobel_quad.xml");
  auto r = run_system(dut, dut.mappings[0], 500'000, quick(1));
  EXPECT_TRUE(r.power.measurable);
  EXPECT_GT(r.iterations.at("sobel"), 0);
  EXPECT_GT(r.power.avg, dut.power_model.static_watts);
}

TEST(Explore, FourteenPointsAndStableArtifacts) {
  const auto dut = load_dut(kData / "sobel_jpeg_explore.xml");
  auto a = run_explore(dut, quick(3, SweepMode::Parallel));
  auto b = run_explore(dut, quick(3, SweepMode::Serial));
  EXPECT_EQ(a.points.size(), 14u);
  EXPECT_EQ(a.points, b.points);
  const auto root = std::filesystem::temp_directory_path() / "sdfmeas_explore_test";
  std::filesystem::remove_all(root);
  const std::vector<ReportFormat> formats{ReportFormat::Csv, ReportFormat::Svg};
  auto pa = write_explore_artifacts(root / "a", a, formats);
  auto pb = write_explore_artifacts(root / "b", b, formats);
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(slurp(pa[i]), slurp(pb[i])) << pa[i];
  std::filesystem::remove_all(root);
}

TEST(Sweep, FirstFailureInJobOrderIsRethrown) {
  auto dut = load_dut(kData / "sobel_quad.xml");
  const auto& m = dut.mappings[0];
  auto ip = annotate(m, dut.graphs, Granularity::Phase, dut.control_cost);
  auto scenarios = enumerate_scenarios(ip, dut.graphs, m);
  std::vector<SweepJob> jobs;
  for (auto& s : scenarios) jobs.push_back({&m, s});
  // Starve GX: its input channel can never hold a full read.
  for (auto& c : dut.graphs[0].channels) {
    if (c.id == "px_gx") c.capacity = 4;
  }
  EXPECT_THROW(run_scenarios(dut, jobs, quick(2)), Error);
}

}  // namespace
}  // namespace sdfmeas
