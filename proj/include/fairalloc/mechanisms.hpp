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

#ifndef FAIRALLOC_MECHANISMS_HPP_
#define FAIRALLOC_MECHANISMS_HPP_

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "fairalloc/maxflow.hpp"
#include "fairalloc/metrics.hpp"
#include "fairalloc/valuation.hpp"

namespace fairalloc {

namespace detail {

// Candidate seats ordered the way picking mechanisms consume them: highest
// rating first, then smallest item id.
inline std::vector<int> by_rating(const Agent& agent, const std::vector<int>& ids) {
  std::vector<int> sorted = ids;
  std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
    if (agent.ratings[a] != agent.ratings[b]) return agent.ratings[a] > agent.ratings[b];
    return a < b;
  });
  return sorted;
}

// Best clean bundle from the remaining seats by exhaustive search; the
// fallback for valuations without slot structure. Ties go to the
// lexicographically smallest id set.
template <Valuation V>
std::vector<int> max_clean_bundle(const V& val, const Bundle& pool) {
  std::vector<int> candidates;
  for (int g : val.approved()) {
    if (pool[g] > 0) candidates.push_back(g);
  }
  const int k = static_cast<int>(candidates.size());
  if (k > 24) throw std::invalid_argument("max_clean_bundle: candidate set too large to enumerate");
  std::vector<int> best;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> chosen;
    Bundle t(pool.num_types());
    for (int bit = 0; bit < k; ++bit) {
      if (mask & (1u << bit)) {
        chosen.push_back(candidates[bit]);
        t.add(candidates[bit]);
      }
    }
    if (!val.is_clean(t)) continue;
    if (chosen.size() > best.size() || (chosen.size() == best.size() && chosen < best)) {
      best = chosen;
    }
  }
  return best;
}

}  // namespace detail

// Serial Dictatorship: agents act once in pick order and take a maximum-value
// clean bundle from the remaining seats. With slot structure the greedy sweep
// (rating desc, id asc, one seat per uncovered slot) is optimal.
template <Valuation V>
Allocation serial_dictatorship(const Instance<V>& inst, const PickOrder& order) {
  Allocation alloc(inst.items, inst.num_agents());
  for (int i : order.order) {
    const V& val = inst.valuations[i];
    if constexpr (std::is_same_v<V, StructuredValuation>) {
      std::vector<int> available;
      for (int g : val.approved()) {
        if (alloc.pool()[g] > 0) available.push_back(g);
      }
      std::set<int> covered;
      int taken = 0;
      for (int g : detail::by_rating(inst.agents[i], available)) {
        if (taken >= val.course_max()) break;
        if (covered.insert(val.slot(g)).second) {
          alloc.transfer(Allocation::pool_row(), Allocation::agent_row(i), g);
          ++taken;
        }
      }
    } else {
      for (int g : detail::max_clean_bundle(val, alloc.pool())) {
        alloc.transfer(Allocation::pool_row(), Allocation::agent_row(i), g);
      }
    }
  }
  return alloc;
}

// Round Robin: repeated rounds over the fixed order; each agent takes one
// remaining seat with marginal gain 1 (highest rating, then smallest id).
// An agent that finds no such seat will never find one later and is retired.
template <Valuation V>
Allocation round_robin(const Instance<V>& inst, const PickOrder& order) {
  Allocation alloc(inst.items, inst.num_agents());
  std::vector<char> done(inst.num_agents(), 0);
  bool progress = true;
  while (progress) {
    progress = false;
    for (int i : order.order) {
      if (done[i]) continue;
      const V& val = inst.valuations[i];
      std::vector<int> candidates;
      for (int g : val.approved()) {
        if (alloc.pool()[g] > 0 && val.marginal(alloc.of(i), g) == 1) candidates.push_back(g);
      }
      if (candidates.empty()) {
        done[i] = 1;
        continue;
      }
      const int g = detail::by_rating(inst.agents[i], candidates).front();
      alloc.transfer(Allocation::pool_row(), Allocation::agent_row(i), g);
      progress = true;
    }
  }
  return alloc;
}

// Exact utilitarian-welfare maximization for slot-structured valuations via
// integral max flow: source -> agent (capacity course_max), agent ->
// (agent, slot) (1), (agent, slot) -> item (1) for approved items in that
// slot, item -> sink (capacity q(g)).
inline Allocation max_usw_flow(const StructuredInstance& inst) {
  const int n = inst.num_agents();
  const int m = inst.num_types();

  int pair_count = 0;
  for (int i = 0; i < n; ++i) {
    std::set<int> slots;
    for (int g : inst.valuations[i].approved()) slots.insert(inst.valuations[i].slot(g));
    pair_count += static_cast<int>(slots.size());
  }

  const int source = 0;
  const auto agent_node = [](int i) { return 1 + i; };
  const auto item_node = [n](int g) { return 1 + n + g; };
  int next_pair_node = 1 + n + m;
  const int sink = 1 + n + m + pair_count;

  MaxFlow flow(sink + 1);
  for (int i = 0; i < n; ++i) flow.add_edge(source, agent_node(i), inst.valuations[i].course_max());

  struct SeatArc {
    int agent;
    int item;
    int handle;
  };
  std::vector<SeatArc> seat_arcs;
  for (int i = 0; i < n; ++i) {
    const StructuredValuation& val = inst.valuations[i];
    std::map<int, int> slot_node;
    for (int g : val.approved()) {
      auto [it, inserted] = slot_node.try_emplace(val.slot(g), -1);
      if (inserted) {
        it->second = next_pair_node++;
        flow.add_edge(agent_node(i), it->second, 1);
      }
      seat_arcs.push_back({i, g, flow.add_edge(it->second, item_node(g), 1)});
    }
  }
  for (int g = 0; g < m; ++g) flow.add_edge(item_node(g), sink, inst.items[g].capacity);

  flow.solve(source, sink);

  Allocation alloc(inst.items, n);
  for (const auto& arc : seat_arcs) {
    if (flow.flow_on(arc.handle) > 0) {
      alloc.transfer(Allocation::pool_row(), Allocation::agent_row(arc.agent), arc.item);
    }
  }
  return alloc;
}

namespace detail {

inline void write_lp_terms(std::ostream& os, const std::vector<std::pair<int, std::string>>& terms) {
  int per_line = 0;
  bool first = true;
  for (const auto& [coef, name] : terms) {
    if (coef == 0) continue;
    if (per_line == 8) {
      os << "\n      ";
      per_line = 0;
    }
    if (first) {
      if (coef == -1) {
        os << "- ";
      } else if (coef != 1) {
        os << coef << " ";
      }
      first = false;
    } else {
      os << (coef < 0 ? " - " : " + ");
      const int mag = coef < 0 ? -coef : coef;
      if (mag != 1) os << mag << " ";
    }
    os << name;
    ++per_line;
  }
}

template <Valuation V>
ConstraintValuation constraints_of(const V& val) {
  if constexpr (std::is_same_v<V, StructuredValuation>) {
    return val.to_constraints();
  } else {
    return val;
  }
}

}  // namespace detail

// Writes the 0/1 welfare-maximization program in LP text format: maximize the
// number of assigned seats subject to each agent's constraint system and the
// per-item capacities. Output is byte-deterministic for a fixed instance.
template <Valuation V>
void export_ilp(const Instance<V>& inst, std::ostream& os) {
  const int n = inst.num_agents();
  const int m = inst.num_types();
  const auto var = [](int i, int g) { return "x_" + std::to_string(i) + "_" + std::to_string(g); };

  os << "\\ utilitarian welfare assignment\n";
  os << "Maximize\n obj: ";
  {
    std::vector<std::pair<int, std::string>> terms;
    for (int i = 0; i < n; ++i) {
      for (int g = 0; g < m; ++g) terms.emplace_back(1, var(i, g));
    }
    detail::write_lp_terms(os, terms);
  }
  os << "\nSubject To\n";
  for (int i = 0; i < n; ++i) {
    const ConstraintValuation cv = detail::constraints_of(inst.valuations[i]);
    for (std::size_t r = 0; r < cv.z().size(); ++r) {
      std::vector<std::pair<int, std::string>> terms;
      for (int g = 0; g < m; ++g) terms.emplace_back(cv.z()[r][g], var(i, g));
      bool any = false;
      for (const auto& [coef, name] : terms) any = any || coef != 0;
      if (!any) continue;
      os << " a" << i << "_r" << r << ": ";
      detail::write_lp_terms(os, terms);
      os << " <= " << cv.b()[r] << "\n";
    }
  }
  for (int g = 0; g < m; ++g) {
    if (n == 0) break;
    std::vector<std::pair<int, std::string>> terms;
    for (int i = 0; i < n; ++i) terms.emplace_back(1, var(i, g));
    os << " cap_" << g << ": ";
    detail::write_lp_terms(os, terms);
    os << " <= " << inst.items[g].capacity << "\n";
  }
  os << "Binaries\n";
  for (int i = 0; i < n; ++i) {
    for (int g = 0; g < m; ++g) os << " " << var(i, g);
  }
  if (n > 0) os << "\n";
  os << "End\n";
}

// ---------------------------------------------------------------------------
// Exhaustive oracles. Enumeration walks agents in id order, assigning each a
// clean 0/1 bundle from the remaining seats.

namespace detail {

template <Valuation V, typename Terminal>
void enumerate_clean(const Instance<V>& inst, Allocation& alloc, std::vector<int>& utilities,
                     int agent, const Terminal& terminal) {
  const int n = inst.num_agents();
  if (agent == n) {
    terminal(utilities);
    return;
  }
  const V& val = inst.valuations[agent];
  std::vector<int> candidates;
  for (int g : val.approved()) {
    if (alloc.pool()[g] > 0) candidates.push_back(g);
  }
  const int k = static_cast<int>(candidates.size());
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    Bundle t(inst.num_types());
    for (int bit = 0; bit < k; ++bit) {
      if (mask & (1u << bit)) t.add(candidates[bit]);
    }
    if (!val.is_clean(t)) continue;
    for (int bit = 0; bit < k; ++bit) {
      if (mask & (1u << bit)) {
        alloc.transfer(Allocation::pool_row(), Allocation::agent_row(agent), candidates[bit]);
      }
    }
    utilities[agent] = t.size();
    enumerate_clean(inst, alloc, utilities, agent + 1, terminal);
    for (int bit = 0; bit < k; ++bit) {
      if (mask & (1u << bit)) {
        alloc.transfer(Allocation::agent_row(agent), Allocation::pool_row(), candidates[bit]);
      }
    }
    utilities[agent] = 0;
  }
}

template <Valuation V>
void guard_enumeration(const Instance<V>& inst, long long max_states) {
  long long states = 1;
  for (int i = 0; i < inst.num_agents(); ++i) {
    const int k = std::min<int>(static_cast<int>(inst.valuations[i].approved().size()), 62);
    for (int b = 0; b < k; ++b) {
      states *= 2;
      if (states > max_states) {
        throw std::invalid_argument("brute force: instance too large to enumerate");
      }
    }
  }
}

}  // namespace detail

inline constexpr long long kDefaultOracleStates = 10'000'000;

// Lexicographic maximum of ascending-sorted utility vectors over all valid
// clean allocations.
template <Valuation V>
std::vector<int> brute_force_leximin(const Instance<V>& inst,
                                     long long max_states = kDefaultOracleStates) {
  detail::guard_enumeration(inst, max_states);
  Allocation alloc(inst.items, inst.num_agents());
  std::vector<int> utilities(inst.num_agents(), 0);
  std::vector<int> best;
  bool have = false;
  detail::enumerate_clean(inst, alloc, utilities, 0, [&](const std::vector<int>& u) {
    if (!have || leximin_compare(u, best) > 0) {
      best = u;
      have = true;
    }
  });
  std::sort(best.begin(), best.end());
  return best;
}

template <Valuation V>
long long brute_force_max_usw(const Instance<V>& inst,
                              long long max_states = kDefaultOracleStates) {
  detail::guard_enumeration(inst, max_states);
  Allocation alloc(inst.items, inst.num_agents());
  std::vector<int> utilities(inst.num_agents(), 0);
  long long best = 0;
  detail::enumerate_clean(inst, alloc, utilities, 0, [&](const std::vector<int>& u) {
    long long sum = 0;
    for (int x : u) sum += x;
    best = std::max(best, sum);
  });
  return best;
}

}  // namespace fairalloc

#endif  // FAIRALLOC_MECHANISMS_HPP_
