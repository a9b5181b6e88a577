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

// Independent reference implementations used only by tests.

#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "sdfmeas/analysis.hpp"
#include "sdfmeas/sdf.hpp"

namespace sdfmeas::oracle {

/// Exhaustive search for the smallest positive integer balance solution,
/// one connected component at a time, entries bounded by `bound`.
inline std::optional<RepetitionVector> brute_force_repetition_vector(const SdfGraph& g, std::int64_t bound = 256) {
  const std::size_t n = g.actors.size();
  std::vector<std::vector<std::size_t>> adj(n);
  auto index = [&](const std::string& id) {
    for (std::size_t i = 0; i < n; ++i) {
      if (g.actors[i].id == id) return i;
    }
    return n;
  };
  struct Edge {
    std::size_t src, dst;
    std::int64_t p, c;
  };
  std::vector<Edge> edges;
  for (const auto& c : g.channels) {
    edges.push_back({index(c.src_actor), index(c.dst_actor), c.produce_rate, c.consume_rate});
    adj[edges.back().src].push_back(edges.back().dst);
    adj[edges.back().dst].push_back(edges.back().src);
  }
  std::vector<std::int64_t> x(n, 0);
  std::vector<int> component(n, -1);
  int components = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (component[s] >= 0) continue;
    std::vector<std::size_t> order{s};
    component[s] = components;
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (auto nb : adj[order[k]]) {
        if (component[nb] < 0) {
          component[nb] = components;
          order.push_back(nb);
        }
      }
    }
    ++components;
    // Depth-first over value assignments in `order`, pruning on every edge
    // whose endpoints are both assigned.
    std::vector<char> assigned(n, 0);
    std::function<bool(std::size_t)> dfs = [&](std::size_t k) -> bool {
      if (k == order.size()) return true;
      const auto a = order[k];
      for (std::int64_t v = 1; v <= bound; ++v) {
        x[a] = v;
        assigned[a] = 1;
        bool ok = true;
        for (const auto& e : edges) {
          if ((e.src == a || e.dst == a) && assigned[e.src] && assigned[e.dst] && x[e.src] * e.p != x[e.dst] * e.c) {
            ok = false;
            break;
          }
        }
        if (ok && dfs(k + 1)) return true;
        assigned[a] = 0;
      }
      return false;
    };
    if (!dfs(0)) return std::nullopt;
  }
  RepetitionVector q;
  for (std::size_t i = 0; i < n; ++i) q[g.actors[i].id] = x[i];
  return q;
}

/// Random graph with 1..max_actors actors and rates in [1, max_rate].
inline SdfGraph random_graph(std::mt19937_64& rng, int max_actors = 5, int max_rate = 4) {
  std::uniform_int_distribution<int> n_dist(1, max_actors), rate(1, max_rate);
  const int n = n_dist(rng);
  SdfGraph g;
  g.id = "g";
  for (int i = 0; i < n; ++i) g.actors.push_back({"a" + std::to_string(i), "", CostSpec::fixed(1)});
  std::uniform_int_distribution<int> edges_dist(0, n + 2), actor(0, n - 1), coin(0, 3);
  const int m = edges_dist(rng);
  for (int e = 0; e < m; ++e) {
    Channel c;
    c.id = "c" + std::to_string(e);
    c.src_actor = g.actors[actor(rng)].id;
    c.dst_actor = g.actors[actor(rng)].id;
    c.produce_rate = rate(rng);
    c.consume_rate = c.src_actor == c.dst_actor && coin(rng) != 0 ? c.produce_rate : rate(rng);
    c.initial_tokens = coin(rng) == 0 ? rate(rng) * max_rate : 0;
    c.capacity = 1 << 20;
    g.channels.push_back(c);
  }
  return g;
}

/// Flags of points not dominated by any other point (all pairs).
inline std::vector<char> all_pairs_front(const std::vector<ParetoPoint>& pts) {
  std::vector<char> out(pts.size(), 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const bool no_worse = pts[j].latency <= pts[i].latency && pts[j].power <= pts[i].power;
      const bool better = pts[j].latency < pts[i].latency || pts[j].power < pts[i].power;
      if (i != j && no_worse && better) out[i] = 0;
    }
  }
  return out;
}

}  // namespace sdfmeas::oracle
