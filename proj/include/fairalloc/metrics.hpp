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

#ifndef FAIRALLOC_METRICS_HPP_
#define FAIRALLOC_METRICS_HPP_

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "fairalloc/valuation.hpp"

namespace fairalloc {

struct MetricsReport {
  long long usw_sum = 0;
  double usw_pct = 0.0;   // fraction of total seats assigned
  double nsw_norm = 0.0;  // geometric mean of positive utilities
  int zero_count = 0;
  long long envy = 0;
  long long ef1_violations = 0;
  long long efx_violations = 0;
  long long pmms_violations = 0;
  std::map<int, int> bundle_histogram;  // bundle size -> number of agents
  double bundle_mean = 0.0;
  double bundle_stddev = 0.0;
};

template <Valuation V>
std::vector<int> utility_vector(const Allocation& alloc, const std::vector<V>& vals) {
  std::vector<int> u(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) u[i] = vals[i].value(alloc.of(static_cast<int>(i)));
  return u;
}

// Utilitarian welfare: total utility and the fraction of seats it represents.
template <Valuation V>
std::pair<long long, double> usw(const Allocation& alloc, const std::vector<V>& vals,
                                 long long seat_total) {
  long long sum = 0;
  for (int u : utility_vector(alloc, vals)) sum += u;
  return {sum, seat_total > 0 ? static_cast<double>(sum) / static_cast<double>(seat_total) : 0.0};
}

// Nash welfare normalized as the geometric mean over positive-utility agents
// (accumulated in log space), plus the number of zero-utility agents.
template <Valuation V>
std::pair<double, int> nsw(const Allocation& alloc, const std::vector<V>& vals) {
  int zeros = 0;
  int positives = 0;
  double log_sum = 0.0;
  for (int u : utility_vector(alloc, vals)) {
    if (u == 0) {
      ++zeros;
    } else {
      ++positives;
      log_sum += std::log(static_cast<double>(u));
    }
  }
  return {positives > 0 ? std::exp(log_sum / positives) : 0.0, zeros};
}

struct EnvyCounts {
  long long envy = 0;
  long long ef1 = 0;
  long long efx = 0;
};

// Ordered-pair counters. A pair (i, j) is an EF-1 violation when no single
// removal from j's bundle kills i's envy, and an EF-X violation when some
// removal fails to kill it.
template <Valuation V>
EnvyCounts envy_counts(const Allocation& alloc, const std::vector<V>& vals) {
  const int n = static_cast<int>(vals.size());
  EnvyCounts out;
  for (int i = 0; i < n; ++i) {
    const int own = vals[i].value(alloc.of(i));
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const Bundle& other = alloc.of(j);
      if (own >= vals[i].value(other)) continue;
      ++out.envy;
      bool all_removals_fail = true;
      bool some_removal_fails = false;
      for (int g = 0; g < other.num_types(); ++g) {
        if (other[g] == 0) continue;
        if (own >= vals[i].value(other.minus(g))) {
          all_removals_fail = false;
        } else {
          some_removal_fails = true;
        }
      }
      if (all_removals_fail) ++out.ef1;
      if (some_removal_fails) ++out.efx;
    }
  }
  return out;
}

namespace detail {

// max over sub-bundles T of `combined` (restricted to coordinates in
// `coords`) of min(v(T), v(combined - T)). Stops early once `beat` is
// exceeded.
template <Valuation V>
int best_split_min(const V& val, const Bundle& combined, const std::vector<int>& coords,
                   int beat) {
  std::vector<int> take(coords.size(), 0);
  Bundle t(combined.num_types());
  Bundle rest = combined;
  int best = 0;
  while (true) {
    const int lo = std::min(val.value(t), val.value(rest));
    best = std::max(best, lo);
    if (best > beat) return best;
    std::size_t pos = 0;
    while (pos < coords.size()) {
      const int g = coords[pos];
      if (take[pos] < combined[g]) {
        ++take[pos];
        t.add(g);
        rest.remove(g);
        break;
      }
      while (take[pos] > 0) {
        --take[pos];
        t.remove(g);
        rest.add(g);
      }
      ++pos;
    }
    if (pos == coords.size()) break;
  }
  return best;
}

}  // namespace detail

// Ordered pairs (i, j) for which i values its bundle below the worse half of
// the best two-way split of the pair's combined copies. The split search only
// varies i's approved coordinates; everything else is worthless to i.
template <Valuation V>
long long pmms_violations(const Allocation& alloc, const std::vector<V>& vals) {
  const int n = static_cast<int>(vals.size());
  long long count = 0;
  for (int i = 0; i < n; ++i) {
    const int own = vals[i].value(alloc.of(i));
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      Bundle combined = alloc.of(i) + alloc.of(j);
      // No split can beat the value of the combined bundle.
      if (own >= vals[i].value(combined)) continue;
      std::vector<int> coords;
      for (int g : vals[i].approved()) {
        if (combined[g] > 0) coords.push_back(g);
      }
      if (detail::best_split_min(vals[i], combined, coords, own) > own) ++count;
    }
  }
  return count;
}

// Lexicographic comparison of ascending-sorted utility vectors:
// negative when u < w, zero when equal, positive when u > w.
inline int leximin_compare(std::vector<int> u, std::vector<int> w) {
  if (u.size() != w.size()) throw std::invalid_argument("leximin_compare: length mismatch");
  std::sort(u.begin(), u.end());
  std::sort(w.begin(), w.end());
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k] != w[k]) return u[k] < w[k] ? -1 : 1;
  }
  return 0;
}

template <Valuation V>
MetricsReport compute_metrics(const Instance<V>& inst, const Allocation& alloc) {
  MetricsReport rep;
  auto [sum, pct] = usw(alloc, inst.valuations, inst.seat_total());
  rep.usw_sum = sum;
  rep.usw_pct = pct;
  auto [nash, zeros] = nsw(alloc, inst.valuations);
  rep.nsw_norm = nash;
  rep.zero_count = zeros;
  auto ec = envy_counts(alloc, inst.valuations);
  rep.envy = ec.envy;
  rep.ef1_violations = ec.ef1;
  rep.efx_violations = ec.efx;
  rep.pmms_violations = pmms_violations(alloc, inst.valuations);

  double mean = 0.0;
  for (int i = 0; i < inst.num_agents(); ++i) {
    const int size = alloc.of(i).size();
    ++rep.bundle_histogram[size];
    mean += size;
  }
  const int n = inst.num_agents();
  mean = n > 0 ? mean / n : 0.0;
  double var = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = alloc.of(i).size() - mean;
    var += d * d;
  }
  rep.bundle_mean = mean;
  rep.bundle_stddev = n > 0 ? std::sqrt(var / n) : 0.0;
  return rep;
}

}  // namespace fairalloc

#endif  // FAIRALLOC_METRICS_HPP_
