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

#ifndef FAIRALLOC_EXCHANGE_HPP_
#define FAIRALLOC_EXCHANGE_HPP_

#include <cassert>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "fairalloc/valuation.hpp"

namespace fairalloc {

// Directed graph over item types together with the responsible-agents map:
// edge (g, h) exists exactly when some holder of g can swap it for h at no
// utility loss, and responsible(g, h) lists those holders. Self-pairs are
// never stored; they carry no information for path search.
class ExchangeGraph {
 public:
  explicit ExchangeGraph(int num_types) : m_(num_types), adj_(num_types, std::vector<char>(num_types, 0)) {}

  int num_types() const { return m_; }
  bool has_edge(int g, int h) const { return adj_[g][h] != 0; }

  const std::set<int>* responsible(int g, int h) const {
    auto it = responsible_.find({g, h});
    return it == responsible_.end() ? nullptr : &it->second;
  }

  void add_responsible(int g, int h, int agent) {
    if (g == h) return;
    auto& set = responsible_[{g, h}];
    set.insert(agent);
    adj_[g][h] = 1;
  }

  void remove_responsible(int g, int h, int agent) {
    auto it = responsible_.find({g, h});
    if (it == responsible_.end()) return;
    it->second.erase(agent);
    if (it->second.empty()) {
      responsible_.erase(it);
      adj_[g][h] = 0;
    }
  }

  const std::map<std::pair<int, int>, std::set<int>>& responsible_map() const { return responsible_; }

  friend bool operator==(const ExchangeGraph& a, const ExchangeGraph& b) {
    return a.responsible_ == b.responsible_;
  }

 private:
  int m_;
  std::map<std::pair<int, int>, std::set<int>> responsible_;
  std::vector<std::vector<char>> adj_;  // dense mirror for path search
};

template <Valuation V>
struct ExchangeState {
  Allocation alloc;
  ExchangeGraph graph;
  std::set<int> playing;        // agents still in the game
  std::vector<int> utilities;   // cached v_i(X_i)
};

template <Valuation V>
ExchangeState<V> make_exchange_state(const Instance<V>& inst) {
  ExchangeState<V> st{Allocation(inst.items, inst.num_agents()), ExchangeGraph(inst.num_types()), {}, {}};
  st.utilities.assign(inst.num_agents(), 0);
  for (int i = 0; i < inst.num_agents(); ++i) st.playing.insert(i);
  return st;
}

// Rebuilds graph and responsibility sets from the allocation alone; the
// reference against which incremental maintenance is audited.
template <Valuation V>
ExchangeGraph rebuild_exchange_graph(const Instance<V>& inst, const Allocation& alloc) {
  ExchangeGraph graph(inst.num_types());
  for (int i = 0; i < inst.num_agents(); ++i) {
    const Bundle& bundle = alloc.of(i);
    for (int g = 0; g < inst.num_types(); ++g) {
      if (bundle[g] == 0) continue;
      for (int h : inst.valuations[i].approved()) {
        if (h == g) continue;
        if (inst.valuations[i].exchangeable(bundle, g, h)) graph.add_responsible(g, h, i);
      }
    }
  }
  return graph;
}

// Playing agent of minimum cached utility; ties go to the earlier pick-order
// position (higher standing first, then the seeded permutation).
template <Valuation V>
int select_poorest(const ExchangeState<V>& st, const PickOrder& order) {
  if (st.playing.empty()) throw std::logic_error("select_poorest: no playing agents");
  int best = -1;
  for (int i : st.playing) {
    if (best < 0 || st.utilities[i] < st.utilities[best] ||
        (st.utilities[i] == st.utilities[best] && order.rank[i] < order.rank[best])) {
      best = i;
    }
  }
  return best;
}

// Shortest path (by node count) from the agent's marginal-gain set to a type
// with unassigned copies; among equal-length paths the lexicographically
// smallest node sequence. Nodes are item type ids.
template <Valuation V>
std::optional<std::vector<int>> find_transfer_path(const ExchangeState<V>& st,
                                                   const Instance<V>& inst, int agent) {
  const int m = inst.num_types();
  constexpr int kInf = 1 << 30;

  // Distance from every node to the nearest pool node, over forward edges.
  std::vector<int> dist(m, kInf);
  std::queue<int> frontier;
  for (int g = 0; g < m; ++g) {
    if (st.alloc.pool()[g] > 0) {
      dist[g] = 0;
      frontier.push(g);
    }
  }
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int u = 0; u < m; ++u) {
      if (dist[u] == kInf && st.graph.has_edge(u, v)) {
        dist[u] = dist[v] + 1;
        frontier.push(u);
      }
    }
  }

  const std::vector<int> sources = marginal_gain_set(inst.valuations[agent], st.alloc.of(agent));
  int best_len = kInf;
  int start = -1;
  for (int g : sources) {
    if (dist[g] < best_len) {
      best_len = dist[g];
      start = g;
    }
  }
  if (start < 0) return std::nullopt;

  std::vector<int> path{start};
  int cur = start;
  while (dist[cur] > 0) {
    int next = -1;
    for (int h = 0; h < m; ++h) {
      if (st.graph.has_edge(cur, h) && dist[h] == dist[cur] - 1) {
        next = h;
        break;
      }
    }
    path.push_back(next);
    cur = next;
  }
  return path;
}

// Executes a transfer path for `agent`. Phase 1 moves copies along the path
// and retires responsibility entries of agents that lost their copy of the
// source type; phase 2 re-derives every (held, approved) exchange entry for
// the touched agents. The agent's utility rises by exactly one; everyone
// else keeps theirs.
template <Valuation V>
void augment(ExchangeState<V>& st, const Instance<V>& inst, int agent,
             const std::vector<int>& path) {
  if (path.empty()) throw std::invalid_argument("augment: empty path");
  if (inst.valuations[agent].marginal(st.alloc.of(agent), path.front()) != 1) {
    throw std::invalid_argument("augment: stale path, no marginal gain at entry");
  }
  if (st.alloc.pool()[path.back()] < 1) {
    throw std::invalid_argument("augment: stale path, terminal type has no unassigned copy");
  }
  for (std::size_t e = 0; e + 1 < path.size(); ++e) {
    const std::set<int>* responsible = st.graph.responsible(path[e], path[e + 1]);
    if (responsible == nullptr || responsible->empty()) {
      throw std::invalid_argument("augment: stale path, edge has no responsible agents");
    }
  }

  // Phase 1: the requesting agent takes the entry type; each edge's least-id
  // responsible agent swaps its copy of the edge source for the edge target.
  // Conservation only holds again once the terminal pool copy is removed.
  std::set<int> touched{agent};
  st.alloc.add_copy(Allocation::agent_row(agent), path.front());
  for (std::size_t e = 0; e + 1 < path.size(); ++e) {
    const int g = path[e];
    const int h = path[e + 1];
    const int j = *st.graph.responsible(g, h)->begin();
    touched.insert(j);
    st.alloc.remove_copy(Allocation::agent_row(j), g);
    st.alloc.add_copy(Allocation::agent_row(j), h);
    if (st.alloc.of(j)[g] == 0) {
      for (int d : inst.valuations[j].approved()) st.graph.remove_responsible(g, d, j);
    }
  }
  st.alloc.remove_copy(Allocation::pool_row(), path.back());
  st.utilities[agent] += 1;

  // Phase 2: refresh exchangeability of every held type against every
  // approved type for the agents whose bundles changed.
  for (int j : touched) {
    const Bundle& bundle = st.alloc.of(j);
    for (int g = 0; g < inst.num_types(); ++g) {
      if (bundle[g] == 0) continue;
      for (int h : inst.valuations[j].approved()) {
        if (h == g) continue;
        if (inst.valuations[j].exchangeable(bundle, g, h)) {
          st.graph.add_responsible(g, h, j);
        } else {
          st.graph.remove_responsible(g, h, j);
        }
      }
    }
  }

#ifndef NDEBUG
  // Cached utilities against full recomputation: swap participants must have
  // kept theirs, the requesting agent gained exactly one.
  for (int j : touched) {
    assert(st.utilities[j] == inst.valuations[j].value(st.alloc.of(j)));
  }
#endif
}

// Path-length profile of a run: histogram[0] counts iterations where no path
// existed and the agent left the game; histogram[k] counts executed paths of
// k nodes.
struct PathStats {
  std::map<int, int> histogram;
  long long iterations = 0;
};

template <Valuation V>
using IterationHook = std::function<void(const ExchangeState<V>&)>;

template <Valuation V>
std::pair<Allocation, PathStats> run_yankee_swap(const Instance<V>& inst, const PickOrder& order,
                                                 const IterationHook<V>& on_iteration = {}) {
  ExchangeState<V> st = make_exchange_state(inst);
  PathStats stats;
  while (!st.playing.empty()) {
    const int i = select_poorest(st, order);
    const auto path = find_transfer_path(st, inst, i);
    if (path.has_value()) {
      augment(st, inst, i, *path);
      ++stats.histogram[static_cast<int>(path->size())];
    } else {
      st.playing.erase(i);
      ++stats.histogram[0];
    }
    ++stats.iterations;
    if (on_iteration) on_iteration(st);
  }
  return {st.alloc, stats};
}

template <Valuation V>
std::pair<Allocation, PathStats> run_yankee_swap(const Instance<V>& inst, std::uint64_t seed) {
  return run_yankee_swap(inst, make_pick_order(inst.agents, seed));
}

}  // namespace fairalloc

#endif  // FAIRALLOC_EXCHANGE_HPP_
