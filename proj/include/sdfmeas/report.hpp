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
 * @file report.hpp
 * @brief CSV, text-table and SVG outputs. CSV is the canonical machine format;
 * every CSV writer has a reader that restores the written values exactly.
 */

#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sdfmeas/analysis.hpp"

namespace sdfmeas {

enum class ReportFormat { Table, Csv, Svg };

std::string_view to_string(ReportFormat f);
ReportFormat parse_report_format(std::string_view text);

/// block_id,t_best,t_avg,t_worst,p_best,p_avg,p_worst,n ("n/a" for power).
void write_summaries_csv(std::ostream& os, std::span<const MeasurementSummary> summaries);
std::vector<MeasurementSummary> read_summaries_csv(std::istream& is);

/// block_id,start_cycle,end_cycle,duration
void write_timing_csv(std::ostream& os, std::span<const TimingRecord> records);
std::vector<TimingRecord> read_timing_csv(std::istream& is);

/// mapping_id,graph_id,latency_cycles,power_watts,on_front
void write_pareto_csv(std::ostream& os, std::span<const ParetoPoint> points, std::span<const char> on_front);

struct ThroughputRow {
  std::string mapping_id;
  std::string graph_id;
  std::int64_t iterations = 0;
  Cycles cycles = 0;
  double iterations_per_cycle = 0.0;
};

/// mapping_id,graph_id,iterations,cycles,iterations_per_cycle
void write_throughput_csv(std::ostream& os, std::span<const ThroughputRow> rows);

/// Phase table: one row per block, grouped by actor, timing and power
/// best/avg/worst columns.
void render_table(std::ostream& os, std::span<const MeasurementSummary> summaries);

/// Latency/power scatter of one graph; front points highlighted and joined.
void render_pareto_svg(std::ostream& os, const std::string& title, std::span<const ParetoPoint> points,
                       std::span<const char> on_front);

struct ReportSet {
  std::vector<MeasurementSummary> summaries;
  std::vector<ParetoPoint> points;
  std::vector<ThroughputRow> throughput;
};

/// Writes the requested formats into dir (created if needed) and returns
/// the written paths in write order. Throws IoError.
std::vector<std::filesystem::path> emit_reports(const std::filesystem::path& dir, const ReportSet& reports,
                                                std::span<const ReportFormat> formats);

/// Opens path for writing or throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace sdfmeas
