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

#include "sdfmeas/experiment.hpp"

#include <sstream>

namespace sdfmeas {

namespace {

std::uint64_t sampler_stream(const DutDescription& dut, std::uint64_t seed, std::size_t stream, std::size_t rep) {
  return derive_seed(derive_seed(seed, dut.sampler.rng_seed), stream, rep);
}

}  // namespace

ScenarioResult run_job(const DutDescription& dut, const SweepJob& job, std::size_t stream,
                       const SweepOptions& options) {
  const auto& s = job.scenario;
  ScenarioResult out;
  out.scenario_id = s.id;
  out.mapping_id = job.mapping->id;

  SimulationConfig cfg;
  cfg.cost = dut.cost_model;
  cfg.seed = options.seed;
  cfg.controller = s.controller;
  cfg.controller->num_measurements = std::max(options.repetitions, 1);
  cfg.controller->buffer_capacity = static_cast<std::size_t>(cfg.controller->num_measurements);
  cfg.measured_block = s.id;
  cfg.stop.measurements = cfg.controller->num_measurements;

  const auto trace = simulate(dut.platform, *job.mapping, s.programs, dut.graphs, cfg);
  out.timing = trace.timing;
  out.iterations = trace.iterations;
  out.end_cycle = trace.end_cycle;
  out.overflow_count = trace.overflow_count;
  if (options.keep_trace) {
    std::ostringstream os;
    write_trace(os, trace);
    out.trace_csv = os.str();
  }

  const auto signal = synthesize_power_signal(trace, dut.power_model);
  for (std::size_t k = 0; k < out.timing.size(); ++k) {
    const auto& rec = out.timing[k];
    auto m = sample_block(signal, rec.start_cycle, rec.end_cycle, dut.sampler, dut.platform.clock_hz,
                          sampler_stream(dut, options.seed, stream, k));
    out.power.push_back(m.stats);
    out.samples.push_back(std::move(m.samples));
  }
  if (!out.timing.empty()) out.summary = aggregate(out.timing, out.power);
  return out;
}

std::vector<ScenarioResult> run_scenarios(const DutDescription& dut, std::span<const SweepJob> jobs,
                                          const SweepOptions& options) {
  std::vector<ScenarioResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const auto n = static_cast<std::int64_t>(jobs.size());
  auto one = [&](std::int64_t i) {
    try {
      results[i] = run_job(dut, jobs[i], static_cast<std::size_t>(i), options);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (options.mode == SweepMode::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) one(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) one(i);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

AnalyzeResult run_analyze(const DutDescription& dut, const Mapping& mapping, Granularity level,
                          const SweepOptions& options) {
  AnalyzeResult out;
  out.mapping_id = mapping.id;
  const auto ip = annotate(mapping, dut.graphs, level, dut.control_cost);
  out.scenarios = enumerate_scenarios(ip, dut.graphs, mapping, level, options.repetitions);
  std::vector<SweepJob> jobs;
  jobs.reserve(out.scenarios.size());
  for (const auto& s : out.scenarios) jobs.push_back({&mapping, s});
  out.results = run_scenarios(dut, jobs, options);
  for (const auto& r : out.results) {
    if (r.summary) out.summaries.push_back(*r.summary);
  }
  return out;
}

ExploreResult run_explore(const DutDescription& dut, const SweepOptions& options) {
  std::vector<SweepJob> jobs;
  for (const auto& m : dut.mappings) {
    const auto ip = annotate(m, dut.graphs, Granularity::Sdfg, dut.control_cost);
    for (auto& s : enumerate_scenarios(ip, dut.graphs, m, Granularity::Sdfg, options.repetitions)) {
      jobs.push_back({&m, std::move(s)});
    }
  }
  ExploreResult out;
  out.results = run_scenarios(dut, jobs, options);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& r = out.results[i];
    const auto& graph = jobs[i].scenario.target.graph;
    if (!r.summary) continue;
    auto summary = *r.summary;
    summary.block_id = r.mapping_id + ":" + summary.block_id;
    out.summaries.push_back(summary);
    if (summary.power) out.points.push_back({r.mapping_id, graph, summary.t_avg, summary.power->avg});
    const auto it = r.iterations.find(graph);
    const std::int64_t iters = it == r.iterations.end() ? 0 : it->second;
    out.throughput.push_back({r.mapping_id, graph, iters, r.end_cycle,
                              r.end_cycle > 0 ? static_cast<double>(iters) / static_cast<double>(r.end_cycle) : 0.0});
  }
  return out;
}

SystemResult run_system(const DutDescription& dut, const Mapping& mapping, Cycles duration,
                        const SweepOptions& options) {
  if (duration < dut.sampler.min_block_cycles) {
    throw InvalidWindow("system run of " + std::to_string(duration) + " cycles is below the sampling floor");
  }
  SimulationConfig cfg;
  cfg.cost = dut.cost_model;
  cfg.seed = options.seed;
  cfg.stop.cycle_budget = duration;
  const auto trace = simulate(dut.platform, mapping, base_programs(mapping, dut.graphs), dut.graphs, cfg);
  const auto signal = synthesize_power_signal(trace, dut.power_model);
  auto m = sample_continuous(signal, duration, dut.sampler, dut.platform.clock_hz,
                             sampler_stream(dut, options.seed, 0, 0));
  return {mapping.id, duration, m.stats, std::move(m.samples), trace.iterations};
}

std::vector<MeasurementSummary> import_measurements(std::span<const TimingRecord> timing,
                                                    std::span<const PowerSample> samples,
                                                    const SamplerSpec& sampler) {
  // Rails measured at the same instant add up to the board power.
  std::map<Cycles, double> total;
  for (const auto& s : samples) total[s.cycle] += s.watts;

  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<TimingRecord>, std::vector<PowerStats>>> blocks;
  for (const auto& rec : timing) {
    auto [it, fresh] = blocks.try_emplace(rec.block_id);
    if (fresh) order.push_back(rec.block_id);
    it->second.first.push_back(rec);
    PowerStats stats;
    if (rec.duration >= sampler.min_block_cycles) {
      std::vector<PowerSample> window;
      for (auto s = total.lower_bound(rec.start_cycle);
           s != total.end() && s->first <= rec.end_cycle + sampler.trigger_delay_cycles; ++s) {
        window.push_back({s->first, "total", s->second});
      }
      stats = stats_of(window);
    }
    it->second.second.push_back(stats);
  }
  std::vector<MeasurementSummary> out;
  for (const auto& id : order) out.push_back(aggregate(blocks[id].first, blocks[id].second));
  return out;
}

namespace {

template <typename Body>
void write_file(const std::filesystem::path& path, std::vector<std::filesystem::path>& written, Body&& body) {
  auto os = open_output(path);
  body(os);
  os.flush();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
  written.push_back(path);
}

void make_dirs(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

}  // namespace

std::vector<std::filesystem::path> write_analyze_artifacts(const std::filesystem::path& dir,
                                                           const AnalyzeResult& result,
                                                           std::span<const ReportFormat> formats) {
  make_dirs(dir);
  std::vector<std::filesystem::path> written;
  std::vector<TimingRecord> combined;
  for (const auto& r : result.results) {
    const auto sub = dir / "scenarios" / r.scenario_id;
    make_dirs(sub);
    write_file(sub / "timing.csv", written, [&](std::ostream& os) { write_timing_csv(os, r.timing); });
    write_file(sub / "samples.csv", written, [&](std::ostream& os) {
      std::vector<PowerSample> all;
      for (const auto& s : r.samples) all.insert(all.end(), s.begin(), s.end());
      write_samples_csv(os, all);
    });
    if (!r.trace_csv.empty()) {
      write_file(sub / "trace.csv", written, [&](std::ostream& os) { os << r.trace_csv; });
    }
    combined.insert(combined.end(), r.timing.begin(), r.timing.end());
  }
  write_file(dir / "timing.csv", written, [&](std::ostream& os) { write_timing_csv(os, combined); });
  write_file(dir / "scenarios.csv", written,
             [&](std::ostream& os) { write_scenario_manifest(os, result.scenarios); });
  ReportSet reports;
  reports.summaries = result.summaries;
  for (auto& p : emit_reports(dir, reports, formats)) written.push_back(std::move(p));
  return written;
}

std::vector<std::filesystem::path> write_explore_artifacts(const std::filesystem::path& dir,
                                                           const ExploreResult& result,
                                                           std::span<const ReportFormat> formats) {
  make_dirs(dir);
  std::vector<std::filesystem::path> written;
  std::vector<TimingRecord> combined;
  for (const auto& r : result.results) {
    for (auto rec : r.timing) {
      rec.block_id = r.mapping_id + ":" + rec.block_id;
      combined.push_back(std::move(rec));
    }
  }
  write_file(dir / "timing.csv", written, [&](std::ostream& os) { write_timing_csv(os, combined); });
  ReportSet reports{result.summaries, result.points, result.throughput};
  for (auto& p : emit_reports(dir, reports, formats)) written.push_back(std::move(p));
  return written;
}

std::vector<std::filesystem::path> write_system_artifacts(const std::filesystem::path& dir,
                                                          const SystemResult& result) {
  make_dirs(dir);
  std::vector<std::filesystem::path> written;
  write_file(dir / "system.csv", written, [&](std::ostream& os) {
    os << "mapping_id,duration_cycles,p_best,p_avg,p_worst,samples\n" << result.mapping_id << ','
       << result.duration << ',';
    if (result.power.measurable) {
      os << format_double(result.power.best) << ',' << format_double(result.power.avg) << ','
         << format_double(result.power.worst);
    } else {
      os << "n/a,n/a,n/a";
    }
    os << ',' << result.power.sample_count << '\n';
  });
  write_file(dir / "iterations.csv", written, [&](std::ostream& os) {
    os << "graph_id,iterations\n";
    for (const auto& [g, n] : result.iterations) os << g << ',' << n << '\n';
  });
  write_file(dir / "samples.csv", written, [&](std::ostream& os) { write_samples_csv(os, result.samples); });
  return written;
}

}  // namespace sdfmeas
