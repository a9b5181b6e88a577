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
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sdfmeas/analysis.hpp"
#include "sdfmeas/report.hpp"

namespace sdfmeas {
namespace {

std::vector<TimingRecord> timings(std::initializer_list<Cycles> ds) {
  std::vector<TimingRecord> out;
  for (auto d : ds) out.push_back({"b", 0, d, d});
  return out;
}

TEST(Aggregate, Timing) {
  auto one = aggregate(timings({100}), {});
  EXPECT_EQ(one.t_best, 100);
  EXPECT_EQ(one.t_avg, 100.0);
  EXPECT_EQ(one.t_worst, 100);
  auto two = aggregate(timings({7875, 8055}), {});
  EXPECT_EQ(two.t_best, 7875);
  EXPECT_EQ(two.t_avg, 7965.0);
  EXPECT_EQ(two.t_worst, 8055);
  EXPECT_EQ(two.repetitions, 2u);
  EXPECT_FALSE(two.power.has_value());
  EXPECT_THROW(aggregate({}, {}), EmptyInput);
}

TEST(Aggregate, Power) {
  std::vector<PowerStats> p{{true, 0.5, 0.6, 0.7, 3}, PowerStats::not_measurable(), {true, 0.4, 0.8, 0.9, 2}};
  auto s = aggregate(timings({10, 20, 30}), p);
  ASSERT_TRUE(s.power.has_value());
  EXPECT_DOUBLE_EQ(s.power->best, 0.4);
  EXPECT_DOUBLE_EQ(s.power->avg, 0.7);
  EXPECT_DOUBLE_EQ(s.power->worst, 0.9);
  std::vector<PowerStats> none(3, PowerStats::not_measurable());
  EXPECT_FALSE(aggregate(timings({10, 20, 30}), none).power.has_value());
}

TEST(Pareto, Examples) {
  std::vector<ParetoPoint> single{{"m1", "g", 5, 1}};
  EXPECT_EQ(pareto_front(single), single);
  std::vector<ParetoPoint> three{{"a", "g", 10, 1.0}, {"b", "g", 20, 0.5}, {"c", "g", 30, 0.9}};
  EXPECT_EQ(pareto_front(three), (std::vector<ParetoPoint>{three[0], three[1]}));
  std::vector<ParetoPoint> dup{{"a", "g", 10, 1.0}, {"b", "g", 10, 1.0}};
  EXPECT_EQ(pareto_front(dup).size(), 2u);
  EXPECT_TRUE(pareto_front(std::vector<ParetoPoint>{}).empty());
}

TEST(Pareto, ParallelAndSerialMatchOracle) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = std::uniform_int_distribution<int>(0, 300)(rng);
    const int grid = std::uniform_int_distribution<int>(3, 50)(rng);
    std::vector<ParetoPoint> pts;
    for (int i = 0; i < n; ++i) {
      pts.push_back({"m" + std::to_string(i), "g", static_cast<double>(rng() % grid),
                     static_cast<double>(rng() % grid) / 10.0});
    }
    const auto expect = oracle::all_pairs_front(pts);
    EXPECT_EQ(pareto_mask(pts), expect);
    EXPECT_EQ(pareto_mask_serial(pts), expect);
  }
}

TEST(Report, SummariesRoundTrip) {
  std::vector<MeasurementSummary> in{{"GX.read", 18000, 18873.25, 19999, PowerSummary{0.6, 0.6123456789, 0.65}, 20},
                                     {"GX.write", 270, 281.0, 300, std::nullopt, 20}};
  std::stringstream ss;
  write_summaries_csv(ss, in);
  EXPECT_NE(ss.str().find("n/a"), std::string::npos);
  EXPECT_EQ(read_summaries_csv(ss), in);
}

TEST(Report, TimingRoundTripAndSchema) {
  std::vector<TimingRecord> in{{"a", 5, 25, 20}, {"b", 100, 100, 0}};
  std::stringstream ss;
  write_timing_csv(ss, in);
  EXPECT_EQ(read_timing_csv(ss), in);

  std::istringstream bad_header("block_id,begin,end_cycle,duration\n");
  try {
    read_timing_csv(bad_header);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("begin"), std::string::npos);
  }
  std::istringstream bad_value("block_id,start_cycle,end_cycle,duration\na,1,x,2\n");
  EXPECT_THROW(read_timing_csv(bad_value), SchemaError);
}

TEST(Report, TableLayout) {
  std::vector<MeasurementSummary> rows{{"GX.read", 1, 2.0, 3, PowerSummary{0.5, 0.6, 0.7}, 1},
                                       {"GX.write", 4, 5.0, 6, std::nullopt, 1}};
  std::ostringstream os;
  render_table(os, rows);
  const auto s = os.str();
  EXPECT_NE(s.find("0.6000"), std::string::npos);
  EXPECT_NE(s.find("n/a"), std::string::npos);
  EXPECT_EQ(s.find("GX", s.find("GX") + 1), std::string::npos);  // actor printed once per group
  std::ostringstream empty;
  EXPECT_NO_THROW(render_table(empty, {}));
}

TEST(Report, FormatParsing) {
  for (auto f : {ReportFormat::Table, ReportFormat::Csv, ReportFormat::Svg}) {
    EXPECT_EQ(parse_report_format(to_string(f)), f);
  }
  EXPECT_THROW(parse_report_format("pdf"), ParseError);
}

TEST(Report, EmitsOneChartPerGraph) {
  const auto dir = std::filesystem::temp_directory_path() / "sdfmeas_report_test";
  std::filesystem::remove_all(dir);
  ReportSet set;
  for (int m = 1; m <= 7; ++m) {
    set.points.push_back({"map" + std::to_string(m), "sobel", 1000.0 * m, 0.6 - 0.01 * m});
    set.points.push_back({"map" + std::to_string(m), "jpeg", 5000.0 * m, 0.6});
  }
  const std::vector<ReportFormat> formats{ReportFormat::Svg, ReportFormat::Csv};
  auto paths = emit_reports(dir, set, formats);
  int charts = 0;
  for (const auto& p : paths) charts += p.extension() == ".svg";
  EXPECT_EQ(charts, 2);
  EXPECT_TRUE(std::filesystem::exists(dir / "pareto.csv"));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace sdfmeas
