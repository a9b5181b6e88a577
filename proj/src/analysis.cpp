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

#include "sdfmeas/analysis.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace sdfmeas {

MeasurementSummary aggregate(std::span<const TimingRecord> records, std::span<const PowerStats> power) {
  if (records.empty()) throw EmptyInput("aggregate needs at least one timing record");
  MeasurementSummary s;
  s.block_id = records.front().block_id;
  s.repetitions = records.size();
  s.t_best = records.front().duration;
  s.t_worst = records.front().duration;
  double sum = 0.0;
  for (const auto& r : records) {
    s.t_best = std::min(s.t_best, r.duration);
    s.t_worst = std::max(s.t_worst, r.duration);
    sum += static_cast<double>(r.duration);
  }
  s.t_avg = sum / static_cast<double>(records.size());

  std::size_t measurable = 0;
  PowerSummary p;
  double avg_sum = 0.0;
  for (const auto& ps : power) {
    if (!ps.measurable) continue;
    p.best = measurable == 0 ? ps.best : std::min(p.best, ps.best);
    p.worst = measurable == 0 ? ps.worst : std::max(p.worst, ps.worst);
    avg_sum += ps.avg;
    ++measurable;
  }
  if (measurable > 0) {
    p.avg = std::clamp(avg_sum / static_cast<double>(measurable), p.best, p.worst);
    s.power = p;
  }
  return s;
}

bool dominates(const ParetoPoint& a, const ParetoPoint& b) {
  return a.latency <= b.latency && a.power <= b.power && (a.latency < b.latency || a.power < b.power);
}

std::vector<char> pareto_mask(std::span<const ParetoPoint> points) {
  const auto n = static_cast<std::int64_t>(points.size());
  std::vector<char> mask(points.size(), 1);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      if (dominates(points[j], points[i])) {
        mask[i] = 0;
        break;
      }
    }
  }
  return mask;
}

std::vector<char> pareto_mask_serial(std::span<const ParetoPoint> points) {
  // Sweep by ascending latency. Within one latency group only the minimum
  // power survives, and only if it beats every strictly faster point.
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(points[a].latency, points[a].power) < std::pair(points[b].latency, points[b].power);
  });
  std::vector<char> mask(points.size(), 0);
  double best_faster = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < order.size();) {
    const double latency = points[order[g]].latency;
    const double group_min = points[order[g]].power;
    std::size_t end = g;
    for (; end < order.size() && points[order[end]].latency == latency; ++end) {
      if (points[order[end]].power == group_min && group_min < best_faster) mask[order[end]] = 1;
    }
    best_faster = std::min(best_faster, group_min);
    g = end;
  }
  return mask;
}

namespace {

std::vector<ParetoPoint> select(std::span<const ParetoPoint> points, const std::vector<char>& mask) {
  std::vector<ParetoPoint> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (mask[i]) out.push_back(points[i]);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.mapping_id < b.mapping_id; });
  return out;
}

}  // namespace

std::vector<ParetoPoint> pareto_front(std::span<const ParetoPoint> points) {
  return select(points, pareto_mask(points));
}

std::vector<ParetoPoint> pareto_front_serial(std::span<const ParetoPoint> points) {
  return select(points, pareto_mask_serial(points));
}

}  // namespace sdfmeas
