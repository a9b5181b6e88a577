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

// Command-line front end. Exit codes: 0 success, 2 invalid input,
// 3 deadlock, 4 I/O failure, 1 anything else.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "sdfmeas/experiment.hpp"

namespace {

using namespace sdfmeas;

constexpr int kExitInvalid = 2;
constexpr int kExitDeadlock = 3;
constexpr int kExitIo = 4;

struct Common {
  std::string dut_path;
  std::string out_dir = "sdfmeas-out";
  std::optional<std::uint64_t> seed;
  std::optional<int> repetitions;
  std::string mapping;
  std::vector<std::string> formats;
  bool serial = false;
};

std::vector<ReportFormat> formats_of(const std::vector<std::string>& names) {
  if (names.empty()) return {ReportFormat::Csv, ReportFormat::Svg, ReportFormat::Table};
  std::vector<ReportFormat> out;
  for (const auto& n : names) out.push_back(parse_report_format(n));
  return out;
}

SweepOptions sweep_options(const Common& c, const DutDescription& dut) {
  SweepOptions o;
  o.seed = c.seed.value_or(dut.seed);
  o.repetitions = c.repetitions.value_or(dut.repetitions);
  o.mode = c.serial ? SweepMode::Serial : SweepMode::Parallel;
  return o;
}

const Mapping& pick_mapping(const DutDescription& dut, const std::string& id) {
  if (id.empty()) return dut.mappings.front();
  if (const auto* m = dut.find_mapping(id)) return *m;
  ValidationReport r;
  r.add("unknown mapping '" + id + "'");
  throw ValidationError(r);
}

void list_written(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::cout << "wrote " << p.string() << '\n';
}

void add_common(CLI::App* cmd, Common& c, bool sweep) {
  cmd->add_option("dut", c.dut_path, "DUT description (.xml or .json)")->required();
  cmd->add_option("--out-dir", c.out_dir, "Output directory")->envname("SDFMEAS_OUT_DIR");
  cmd->add_option("--seed", c.seed, "Override the DUT seed");
  if (sweep) {
    cmd->add_option("--repetitions", c.repetitions, "Measurements per scenario")->check(CLI::PositiveNumber);
    cmd->add_option("--format", c.formats, "Report format: csv, svg or table (repeatable)")
        ->check(CLI::IsMember({"csv", "svg", "table"}));
    cmd->add_flag("--serial", c.serial, "Run scenarios one after another");
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Timing and power measurement of dataflow applications on a simulated MPSoC"};
  app.require_subcommand(1);

  Common c;
  auto* validate = app.add_subcommand("validate", "Check a DUT description");
  validate->add_option("dut", c.dut_path, "DUT description (.xml or .json)")->required();

  auto* analyze = app.add_subcommand("analyze", "Measure every block of one mapping");
  add_common(analyze, c, true);
  std::string granularity;
  bool trace = false;
  analyze->add_option("--granularity", granularity, "system, sdfg, actor or phase")
      ->check(CLI::IsMember({"system", "sdfg", "actor", "phase"}));
  analyze->add_option("--mapping", c.mapping, "Mapping id (default: first)");
  analyze->add_flag("--trace", trace, "Also write per-scenario statement traces");

  auto* explore = app.add_subcommand("explore", "Graph-level measurement of every mapping");
  add_common(explore, c, true);

  auto* system = app.add_subcommand("system", "Continuous power of an uninstrumented run");
  add_common(system, c, false);
  Cycles duration = 2'000'000;
  system->add_option("--mapping", c.mapping, "Mapping id (default: first)");
  system->add_option("--duration", duration, "Cycles to run")->check(CLI::PositiveNumber);

  auto* import = app.add_subcommand("import", "Aggregate externally recorded timing and samples");
  std::vector<std::string> timing_files, sample_files;
  std::string import_dut;
  import->add_option("--timing", timing_files, "Timing CSV (repeatable)")->required();
  import->add_option("--samples", sample_files, "Sample CSV paired with each --timing");
  import->add_option("--dut", import_dut, "DUT whose sampler settings apply");
  import->add_option("--out-dir", c.out_dir, "Output directory")->envname("SDFMEAS_OUT_DIR");
  import->add_option("--format", c.formats, "Report format: csv or table (repeatable)")
      ->check(CLI::IsMember({"csv", "table"}));

  CLI11_PARSE(app, argc, argv);

  if (*validate) {
    const auto dut = load_dut(c.dut_path);
    const auto& m = dut.mappings.front();
    const auto scenarios =
        enumerate_scenarios(annotate(m, dut.graphs, dut.granularity, dut.control_cost), dut.graphs, m);
    std::cout << "ok: " << dut.graphs.size() << " graph(s), " << dut.mappings.size() << " mapping(s), "
              << scenarios.size() << " scenario(s) at " << to_string(dut.granularity) << " level for "
              << m.id << '\n';
    return 0;
  }
  if (*analyze) {
    const auto dut = load_dut(c.dut_path);
    const auto level = granularity.empty() ? dut.granularity : parse_granularity(granularity);
    auto options = sweep_options(c, dut);
    options.keep_trace = trace;
    const auto result = run_analyze(dut, pick_mapping(dut, c.mapping), level, options);
    render_table(std::cout, result.summaries);
    list_written(write_analyze_artifacts(c.out_dir, result, formats_of(c.formats)));
    return 0;
  }
  if (*explore) {
    const auto dut = load_dut(c.dut_path);
    const auto result = run_explore(dut, sweep_options(c, dut));
    for (const auto& p : result.points) {
      std::cout << p.mapping_id << ' ' << p.graph_id << " latency " << format_double(p.latency) << " power "
                << format_double(p.power) << '\n';
    }
    list_written(write_explore_artifacts(c.out_dir, result, formats_of(c.formats)));
    return 0;
  }
  if (*system) {
    const auto dut = load_dut(c.dut_path);
    const auto result = run_system(dut, pick_mapping(dut, c.mapping), duration, sweep_options(c, dut));
    std::cout << result.mapping_id << " avg power "
              << (result.power.measurable ? format_double(result.power.avg) : std::string("n/a")) << " W\n";
    list_written(write_system_artifacts(c.out_dir, result));
    return 0;
  }
  if (*import) {
    if (!sample_files.empty() && sample_files.size() != timing_files.size()) {
      std::cerr << "error: give one --samples per --timing, or none\n";
      return kExitInvalid;
    }
    SamplerSpec sampler;
    if (!import_dut.empty()) sampler = load_dut(import_dut).sampler;
    std::vector<MeasurementSummary> summaries;
    for (std::size_t i = 0; i < timing_files.size(); ++i) {
      std::ifstream ts(timing_files[i]);
      if (!ts) throw IoError("cannot open '" + timing_files[i] + "'");
      const auto timing = read_timing_csv(ts);
      std::vector<PowerSample> samples;
      if (!sample_files.empty()) {
        std::ifstream ss(sample_files[i]);
        if (!ss) throw IoError("cannot open '" + sample_files[i] + "'");
        samples = read_samples_csv(ss);
      }
      for (auto& s : import_measurements(timing, samples, sampler)) summaries.push_back(std::move(s));
    }
    render_table(std::cout, summaries);
    if (c.formats.empty()) c.formats = {"csv", "table"};
    ReportSet reports;
    reports.summaries = std::move(summaries);
    list_written(emit_reports(c.out_dir, reports, formats_of(c.formats)));
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sdfmeas::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitInvalid;
  } catch (const sdfmeas::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const sdfmeas::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const sdfmeas::DeadlockError& e) {
    std::cerr << e.what() << '\n';
    for (const auto& line : e.blocked()) std::cerr << "  " << line << '\n';
    return kExitDeadlock;
  } catch (const sdfmeas::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
