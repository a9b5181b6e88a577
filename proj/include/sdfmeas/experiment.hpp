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
 * @file experiment.hpp
 * @brief Scenario sweeps, mapping exploration, continuous system runs and
 * the import path for externally recorded measurements.
 *
 * Every scenario of a sweep simulates with the same seed, so all scenarios
 * share one schedule of compute costs; only the sampler stream differs per
 * scenario and repetition. Sweeps run serially or with one OpenMP task per
 * job and always merge results in job order.
 */

#pragma once

#include <exception>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sdfmeas/analysis.hpp"
#include "sdfmeas/dut.hpp"
#include "sdfmeas/report.hpp"

namespace sdfmeas {

enum class SweepMode { Serial, Parallel };

/// One simulation: a scenario of a mapping, run until the requested number of
/// measurements were recorded.
struct SweepJob {
  const Mapping* mapping = nullptr;
  MeasurementScenario scenario;
};

struct ScenarioResult {
  std::string scenario_id;
  std::string mapping_id;
  std::vector<TimingRecord> timing;
  std::vector<PowerStats> power;  // per timing record
  std::vector<std::vector<PowerSample>> samples;  // per timing record
  std::optional<MeasurementSummary> summary;  // nullopt when nothing was recorded
  std::map<std::string, std::int64_t, std::less<>> iterations;  // per graph
  Cycles end_cycle = 0;
  std::size_t overflow_count = 0;
  std::string trace_csv;  // filled when traces are kept
};

struct SweepOptions {
  int repetitions = 10;
  std::uint64_t seed = 1;
  SweepMode mode = SweepMode::Parallel;
  bool keep_trace = false;
};

/// Runs one job; stream selects the sampler random stream.
ScenarioResult run_job(const DutDescription& dut, const SweepJob& job, std::size_t stream,
                       const SweepOptions& options);

/// Runs all jobs and returns results in job order. The first failure in job
/// order is rethrown after every job has finished.
std::vector<ScenarioResult> run_scenarios(const DutDescription& dut, std::span<const SweepJob> jobs,
                                          const SweepOptions& options);

struct AnalyzeResult {
  std::string mapping_id;
  std::vector<MeasurementScenario> scenarios;
  std::vector<ScenarioResult> results;
  std::vector<MeasurementSummary> summaries;
};

/// Enumerates the scenarios at level for one mapping and measures each.
AnalyzeResult run_analyze(const DutDescription& dut, const Mapping& mapping, Granularity level,
                          const SweepOptions& options);

struct ExploreResult {
  std::vector<ScenarioResult> results;  // mapping-major, graph-minor
  std::vector<MeasurementSummary> summaries;  // block id "<mapping>:<graph>.iteration"
  std::vector<ParetoPoint> points;
  std::vector<ThroughputRow> throughput;
};

/// Graph-level measurement of every graph under every mapping.
ExploreResult run_explore(const DutDescription& dut, const SweepOptions& options);

struct SystemResult {
  std::string mapping_id;
  Cycles duration = 0;
  PowerStats power;
  std::vector<PowerSample> samples;
  std::map<std::string, std::int64_t, std::less<>> iterations;
};

/// Uninstrumented run of duration cycles, measured continuously.
SystemResult run_system(const DutDescription& dut, const Mapping& mapping, Cycles duration,
                        const SweepOptions& options);

/// Re-aggregates externally recorded data. A sample belongs to a timing
/// record when its cycle lies in [start, end + trigger_delay]; samples of
/// several rails at one cycle are summed. Blocks shorter than
/// min_block_cycles report no power.
std::vector<MeasurementSummary> import_measurements(std::span<const TimingRecord> timing,
                                                    std::span<const PowerSample> samples,
                                                    const SamplerSpec& sampler);

/// Per-scenario timing/samples CSVs, combined timing.csv, scenario manifest
/// and the requested reports. Returns written paths.
std::vector<std::filesystem::path> write_analyze_artifacts(const std::filesystem::path& dir,
                                                           const AnalyzeResult& result,
                                                           std::span<const ReportFormat> formats);

std::vector<std::filesystem::path> write_explore_artifacts(const std::filesystem::path& dir,
                                                           const ExploreResult& result,
                                                           std::span<const ReportFormat> formats);

std::vector<std::filesystem::path> write_system_artifacts(const std::filesystem::path& dir,
                                                          const SystemResult& result);

}  // namespace sdfmeas
