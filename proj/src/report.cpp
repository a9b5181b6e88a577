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

#include "sdfmeas/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "csv.hpp"

namespace sdfmeas {

std::string_view to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::Table: return "table";
    case ReportFormat::Csv: return "csv";
    case ReportFormat::Svg: return "svg";
  }
  return "?";
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "table") return ReportFormat::Table;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "svg") return ReportFormat::Svg;
  throw ParseError("unknown report format '" + std::string(text) + "'");
}

void write_summaries_csv(std::ostream& os, std::span<const MeasurementSummary> summaries) {
  os << "block_id,t_best,t_avg,t_worst,p_best,p_avg,p_worst,n\n";
  for (const auto& s : summaries) {
    os << s.block_id << ',' << s.t_best << ',' << format_double(s.t_avg) << ',' << s.t_worst << ',';
    if (s.power) {
      os << format_double(s.power->best) << ',' << format_double(s.power->avg) << ','
         << format_double(s.power->worst);
    } else {
      os << "n/a,n/a,n/a";
    }
    os << ',' << s.repetitions << '\n';
  }
}

std::vector<MeasurementSummary> read_summaries_csv(std::istream& is) {
  const auto t = csv::read(is, {"block_id", "t_best", "t_avg", "t_worst", "p_best", "p_avg", "p_worst", "n"});
  std::vector<MeasurementSummary> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    MeasurementSummary s;
    s.block_id = t.rows[r][0];
    s.t_best = csv::to_int(t, r, 1);
    s.t_avg = csv::to_double(t, r, 2);
    s.t_worst = csv::to_int(t, r, 3);
    const int na = csv::is_na(t, r, 4) + csv::is_na(t, r, 5) + csv::is_na(t, r, 6);
    if (na == 0) {
      s.power = PowerSummary{csv::to_double(t, r, 4), csv::to_double(t, r, 5), csv::to_double(t, r, 6)};
    } else if (na != 3) {
      throw SchemaError("line " + std::to_string(t.line_numbers[r]) +
                        ", column 'p_best': power columns must be all numeric or all n/a");
    }
    const auto n = csv::to_int(t, r, 7);
    if (n < 1) throw SchemaError("line " + std::to_string(t.line_numbers[r]) + ", column 'n': must be >= 1");
    s.repetitions = static_cast<std::size_t>(n);
    out.push_back(std::move(s));
  }
  return out;
}

void write_timing_csv(std::ostream& os, std::span<const TimingRecord> records) {
  os << "block_id,start_cycle,end_cycle,duration\n";
  for (const auto& r : records) {
    os << r.block_id << ',' << r.start_cycle << ',' << r.end_cycle << ',' << r.duration << '\n';
  }
}

std::vector<TimingRecord> read_timing_csv(std::istream& is) {
  const auto t = csv::read(is, {"block_id", "start_cycle", "end_cycle", "duration"});
  std::vector<TimingRecord> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    TimingRecord rec{t.rows[r][0], csv::to_int(t, r, 1), csv::to_int(t, r, 2), csv::to_int(t, r, 3)};
    if (rec.duration != rec.end_cycle - rec.start_cycle || rec.duration < 0) {
      throw SchemaError("line " + std::to_string(t.line_numbers[r]) +
                        ", column 'duration': must equal end_cycle - start_cycle and be >= 0");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void write_pareto_csv(std::ostream& os, std::span<const ParetoPoint> points, std::span<const char> on_front) {
  os << "mapping_id,graph_id,latency_cycles,power_watts,on_front\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    os << p.mapping_id << ',' << p.graph_id << ',' << format_double(p.latency) << ','
       << format_double(p.power) << ',' << (on_front[i] ? 1 : 0) << '\n';
  }
}

void write_throughput_csv(std::ostream& os, std::span<const ThroughputRow> rows) {
  os << "mapping_id,graph_id,iterations,cycles,iterations_per_cycle\n";
  for (const auto& r : rows) {
    os << r.mapping_id << ',' << r.graph_id << ',' << r.iterations << ',' << r.cycles << ','
       << format_double(r.iterations_per_cycle) << '\n';
  }
}

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string pad(std::string s, std::size_t width, bool right) {
  if (s.size() >= width) return s;
  return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
}

}  // namespace

void render_table(std::ostream& os, std::span<const MeasurementSummary> summaries) {
  const std::vector<std::string> head = {"block", "phase", "t_best", "t_avg", "t_worst",
                                         "p_best", "p_avg", "p_worst"};
  std::vector<std::vector<std::string>> rows;
  std::string previous_actor;
  for (const auto& s : summaries) {
    const auto dot = s.block_id.rfind('.');
    std::string actor = dot == std::string::npos ? s.block_id : s.block_id.substr(0, dot);
    std::string phase = dot == std::string::npos ? "-" : s.block_id.substr(dot + 1);
    std::vector<std::string> row = {actor == previous_actor ? "" : actor, phase, std::to_string(s.t_best),
                                    fixed(s.t_avg, 1), std::to_string(s.t_worst)};
    for (double v : {s.power ? s.power->best : 0.0, s.power ? s.power->avg : 0.0,
                     s.power ? s.power->worst : 0.0}) {
      row.push_back(s.power ? fixed(v, 4) : "n/a");
    }
    previous_actor = actor;
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& r) {
    std::string out;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c == 2 || c == 5) out += " | ";
      else if (c > 0) out += "  ";
      out += pad(r[c], width[c], c >= 2);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    os << out << '\n';
  };
  line(head);
  std::size_t total = 0;
  for (auto w : width) total += w;
  os << std::string(total + 2 * (head.size() - 3) + 6, '-') << '\n';
  for (const auto& r : rows) line(r);
}

void render_pareto_svg(std::ostream& os, const std::string& title, std::span<const ParetoPoint> points,
                       std::span<const char> on_front) {
  constexpr double kW = 640, kH = 480, kLeft = 80, kRight = 24, kTop = 40, kBottom = 60;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!points.empty()) {
    auto [xa, xb] = std::minmax_element(points.begin(), points.end(),
                                        [](const auto& a, const auto& b) { return a.latency < b.latency; });
    auto [ya, yb] = std::minmax_element(points.begin(), points.end(),
                                        [](const auto& a, const auto& b) { return a.power < b.power; });
    const double dx = std::max(xb->latency - xa->latency, std::abs(xa->latency) * 0.05 + 1e-9);
    const double dy = std::max(yb->power - ya->power, std::abs(ya->power) * 0.05 + 1e-9);
    x0 = xa->latency - 0.08 * dx;
    x1 = xb->latency + 0.08 * dx;
    y0 = ya->power - 0.08 * dy;
    y1 = yb->power + 0.08 * dy;
  }
  auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * (kW - kLeft - kRight); };
  auto py = [&](double v) { return kH - kBottom - (v - y0) / (y1 - y0) * (kH - kTop - kBottom); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n"
     << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n"
     << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" << title
     << "</text>\n"
     << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight << "\" y2=\""
     << kH - kBottom << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kH - kBottom
     << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << (kLeft + kW - kRight) / 2 << "\" y=\"" << kH - 16
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">latency [cycles/iteration]</text>\n"
     << "<text x=\"18\" y=\"" << (kTop + kH - kBottom) / 2 << "\" transform=\"rotate(-90 18 "
     << (kTop + kH - kBottom) / 2
     << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">power [W]</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << fixed(px(xv), 1) << "\" y=\"" << kH - kBottom + 16
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << fixed(xv, 0) << "</text>\n"
       << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(py(yv) + 3, 1)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fixed(yv, 4) << "</text>\n";
  }
  std::vector<const ParetoPoint*> front;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (on_front[i]) front.push_back(&points[i]);
  }
  std::sort(front.begin(), front.end(), [](const auto* a, const auto* b) { return a->latency < b->latency; });
  if (front.size() > 1) {
    os << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-dasharray=\"4 3\" points=\"";
    for (const auto* p : front) os << fixed(px(p->latency), 1) << ',' << fixed(py(p->power), 1) << ' ';
    os << "\"/>\n";
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const char* colour = on_front[i] ? "#c0392b" : "#7f8c8d";
    os << "<circle cx=\"" << fixed(px(p.latency), 1) << "\" cy=\"" << fixed(py(p.power), 1)
       << "\" r=\"5\" fill=\"" << colour << "\"/>\n"
       << "<text x=\"" << fixed(px(p.latency) + 7, 1) << "\" y=\"" << fixed(py(p.power) - 7, 1)
       << "\" font-family=\"sans-serif\" font-size=\"10\">" << p.mapping_id << "</text>\n";
  }
  os << "</svg>\n";
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

namespace {

void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::vector<std::filesystem::path> emit_reports(const std::filesystem::path& dir, const ReportSet& reports,
                                                std::span<const ReportFormat> formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  auto has = [&](ReportFormat f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, auto&& body) {
    const auto path = dir / name;
    auto os = open_output(path);
    body(os);
    finish(os, path);
    written.push_back(path);
  };

  // Pareto points grouped per graph in first-seen order.
  std::vector<std::string> graphs;
  std::map<std::string, std::vector<ParetoPoint>> by_graph;
  for (const auto& p : reports.points) {
    if (!by_graph.count(p.graph_id)) graphs.push_back(p.graph_id);
    by_graph[p.graph_id].push_back(p);
  }
  std::vector<ParetoPoint> ordered;
  std::vector<char> mask;
  for (const auto& g : graphs) {
    const auto& pts = by_graph[g];
    const auto m = pareto_mask(pts);
    ordered.insert(ordered.end(), pts.begin(), pts.end());
    mask.insert(mask.end(), m.begin(), m.end());
  }

  if (has(ReportFormat::Csv)) {
    if (!reports.summaries.empty() || reports.points.empty()) {
      emit("summaries.csv", [&](std::ostream& os) { write_summaries_csv(os, reports.summaries); });
    }
    if (!reports.points.empty()) {
      emit("pareto.csv", [&](std::ostream& os) { write_pareto_csv(os, ordered, mask); });
    }
    if (!reports.throughput.empty()) {
      emit("throughput.csv", [&](std::ostream& os) { write_throughput_csv(os, reports.throughput); });
    }
  }
  if (has(ReportFormat::Table) && (!reports.summaries.empty() || reports.points.empty())) {
    emit("table.txt", [&](std::ostream& os) { render_table(os, reports.summaries); });
  }
  if (has(ReportFormat::Svg)) {
    std::size_t offset = 0;
    for (const auto& g : graphs) {
      const auto& pts = by_graph[g];
      std::span<const char> m(mask.data() + offset, pts.size());
      emit("pareto_" + g + ".svg", [&](std::ostream& os) { render_pareto_svg(os, g, pts, m); });
      offset += pts.size();
    }
  }
  return written;
}

}  // namespace sdfmeas
