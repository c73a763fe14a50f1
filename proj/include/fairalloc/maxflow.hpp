// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRALLOC_MAXFLOW_HPP_
#define FAIRALLOC_MAXFLOW_HPP_

#include <limits>
#include <queue>
#include <vector>

namespace fairalloc {

// Dinic's algorithm on integer capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int num_nodes) : graph_(num_nodes) {}

  // Returns an edge handle usable with flow_on() after solve().
  int add_edge(int from, int to, int capacity) {
    const int handle = static_cast<int>(edges_.size());
    graph_[from].push_back(handle);
    edges_.push_back({to, capacity});
    graph_[to].push_back(handle + 1);
    edges_.push_back({from, 0});
    return handle;
  }

  long long solve(int source, int sink) {
    long long total = 0;
    while (bfs(source, sink)) {
      iter_.assign(graph_.size(), 0);
      while (true) {
        const long long pushed = dfs(source, sink, std::numeric_limits<long long>::max());
        if (pushed == 0) break;
        total += pushed;
      }
    }
    return total;
  }

  int flow_on(int handle) const { return edges_[handle + 1].capacity; }

 private:
  struct Edge {
    int to;
    int capacity;  // residual
  };

  bool bfs(int source, int sink) {
    level_.assign(graph_.size(), -1);
    std::queue<int> q;
    level_[source] = 0;
    q.push(source);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int handle : graph_[v]) {
        const Edge& e = edges_[handle];
        if (e.capacity > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[v] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  long long dfs(int v, int sink, long long limit) {
    if (v == sink) return limit;
    for (std::size_t& idx = iter_[v]; idx < graph_[v].size(); ++idx) {
      const int handle = graph_[v][idx];
      Edge& e = edges_[handle];
      if (e.capacity <= 0 || level_[e.to] != level_[v] + 1) continue;
      const long long pushed = dfs(e.to, sink, std::min(limit, static_cast<long long>(e.capacity)));
      if (pushed > 0) {
        e.capacity -= static_cast<int>(pushed);
        edges_[handle ^ 1].capacity += static_cast<int>(pushed);
        return pushed;
      }
    }
    return 0;
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> graph_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

}  // namespace fairalloc

#endif  // FAIRALLOC_MAXFLOW_HPP_
