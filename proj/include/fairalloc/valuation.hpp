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

#ifndef FAIRALLOC_VALUATION_HPP_
#define FAIRALLOC_VALUATION_HPP_

#include <concepts>
#include <map>
#include <stdexcept>
#include <vector>

#include "fairalloc/types.hpp"

namespace fairalloc {

// Binary valuation usable by the mechanisms. value(S) is the size of the
// largest feasible sub-bundle of S; marginals are always 0 or 1.
template <typename V>
concept Valuation = requires(const V& v, const Bundle& s, int g) {
  { v.value(s) } -> std::convertible_to<int>;
  { v.marginal(s, g) } -> std::convertible_to<int>;
  { v.exchangeable(s, g, g) } -> std::convertible_to<bool>;
  { v.is_clean(s) } -> std::convertible_to<bool>;
  { v.approved() } -> std::convertible_to<const std::vector<int>&>;
  { v.course_max() } -> std::convertible_to<int>;
};

// Preferences encoded by linear inequality constraints Z*S <= b. A bundle is
// feasible exactly when it satisfies every row; the value of a bundle is the
// cardinality of its largest feasible sub-bundle, found by enumeration over
// the approved coordinates. Exact for any constraint system whose feasible
// region is downward closed.
class ConstraintValuation {
 public:
  ConstraintValuation(int num_types, std::vector<std::vector<int>> z, std::vector<int> b,
                      int course_max, std::vector<int> slot_of = {})
      : num_types_(num_types),
        z_(std::move(z)),
        b_(std::move(b)),
        course_max_(course_max),
        slot_of_(std::move(slot_of)) {
    if (z_.size() != b_.size()) throw std::invalid_argument("constraint rows and limits differ");
    for (const auto& row : z_) {
      if (static_cast<int>(row.size()) != num_types_) {
        throw std::invalid_argument("constraint row width differs from type count");
      }
    }
    if (slot_of_.empty()) slot_of_.assign(num_types_, 0);
    for (int g = 0; g < num_types_; ++g) {
      Bundle unit(num_types_);
      unit.add(g);
      if (feasible(unit)) approved_.push_back(g);
    }
  }

  int num_types() const { return num_types_; }
  const std::vector<std::vector<int>>& z() const { return z_; }
  const std::vector<int>& b() const { return b_; }
  const std::vector<int>& approved() const { return approved_; }
  int course_max() const { return course_max_; }
  const std::vector<int>& slot_of() const { return slot_of_; }

  bool feasible(const Bundle& s) const {
    for (std::size_t r = 0; r < z_.size(); ++r) {
      long long dot = 0;
      for (int g = 0; g < num_types_; ++g) dot += static_cast<long long>(z_[r][g]) * s[g];
      if (dot > b_[r]) return false;
    }
    return true;
  }

  int value(const Bundle& s) const {
    std::vector<int> support;
    for (int g : approved_) {
      if (s[g] > 0) support.push_back(g);
    }
    // Odometer over per-type counts 0..s[g] restricted to the support.
    std::vector<int> take(support.size(), 0);
    Bundle t(num_types_);
    int best = 0;
    while (true) {
      if (feasible(t)) best = std::max(best, t.size());
      std::size_t pos = 0;
      while (pos < support.size()) {
        if (take[pos] < s[support[pos]]) {
          ++take[pos];
          t.add(support[pos]);
          break;
        }
        t[support[pos]] = 0;
        take[pos] = 0;
        ++pos;
      }
      if (pos == support.size()) break;
    }
    return best;
  }

  int marginal(const Bundle& s, int g) const { return value(s.plus(g)) - value(s); }

  bool exchangeable(const Bundle& s, int g, int h) const {
    if (s[g] < 1) throw std::invalid_argument("exchangeable: bundle holds no copy of g");
    if (g == h) return true;
    return value(s.minus(g).plus(h)) == value(s);
  }

  bool is_clean(const Bundle& s) const { return value(s) == s.size(); }

 private:
  int num_types_;
  std::vector<std::vector<int>> z_;
  std::vector<int> b_;
  int course_max_;
  std::vector<int> slot_of_;
  std::vector<int> approved_;
};

// The structured course case: approvals plus a slot partition plus a schedule
// size cap. The value function is a matroid rank (partition matroid truncated
// at course_max), so everything reduces to counting covered slots.
class StructuredValuation {
 public:
  StructuredValuation(int num_types, std::vector<int> approved, std::vector<int> slot_of,
                      int course_max)
      : num_types_(num_types),
        approved_(std::move(approved)),
        slot_of_(std::move(slot_of)),
        course_max_(course_max),
        is_approved_(num_types, 0) {
    if (static_cast<int>(slot_of_.size()) != num_types_) {
      throw std::invalid_argument("slot map size differs from type count");
    }
    std::sort(approved_.begin(), approved_.end());
    for (int g : approved_) is_approved_[g] = 1;
  }

  int num_types() const { return num_types_; }
  const std::vector<int>& approved() const { return approved_; }
  int course_max() const { return course_max_; }
  const std::vector<int>& slot_of() const { return slot_of_; }
  bool approves(int g) const { return is_approved_[g] != 0; }
  int slot(int g) const { return slot_of_[g]; }

  // Number of distinct slots covered by approved types in s, uncapped.
  int covered_slots(const Bundle& s) const {
    std::vector<int> slots;
    for (int g : approved_) {
      if (s[g] > 0) slots.push_back(slot_of_[g]);
    }
    std::sort(slots.begin(), slots.end());
    slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
    return static_cast<int>(slots.size());
  }

  int value(const Bundle& s) const { return std::min(course_max_, covered_slots(s)); }

  int marginal(const Bundle& s, int g) const {
    if (!approves(g)) return 0;
    for (int h : approved_) {
      if (s[h] > 0 && slot_of_[h] == slot_of_[g]) return 0;
    }
    return covered_slots(s) < course_max_ ? 1 : 0;
  }

  bool exchangeable(const Bundle& s, int g, int h) const {
    if (s[g] < 1) throw std::invalid_argument("exchangeable: bundle holds no copy of g");
    if (g == h) return true;
    return value(s.minus(g).plus(h)) == value(s);
  }

  bool is_clean(const Bundle& s) const { return value(s) == s.size(); }

  // The equivalent linear constraint system: one row per slot touched by an
  // approved type, the schedule cap, a zero cap per unapproved type, and a
  // unit cap per type.
  ConstraintValuation to_constraints() const {
    std::vector<std::vector<int>> z;
    std::vector<int> b;
    std::map<int, std::vector<int>> by_slot;
    for (int g : approved_) by_slot[slot_of_[g]].push_back(g);
    for (const auto& [slot, members] : by_slot) {
      std::vector<int> row(num_types_, 0);
      for (int g : members) row[g] = 1;
      z.push_back(row);
      b.push_back(1);
    }
    {
      std::vector<int> row(num_types_, 0);
      for (int g : approved_) row[g] = 1;
      z.push_back(row);
      b.push_back(course_max_);
    }
    for (int g = 0; g < num_types_; ++g) {
      if (!approves(g)) {
        std::vector<int> row(num_types_, 0);
        row[g] = 1;
        z.push_back(row);
        b.push_back(0);
      }
    }
    for (int g = 0; g < num_types_; ++g) {
      std::vector<int> row(num_types_, 0);
      row[g] = 1;
      z.push_back(row);
      b.push_back(1);
    }
    return ConstraintValuation(num_types_, std::move(z), std::move(b), course_max_, slot_of_);
  }

 private:
  int num_types_;
  std::vector<int> approved_;
  std::vector<int> slot_of_;
  int course_max_;
  std::vector<char> is_approved_;
};

// Types with marginal gain 1 given bundle s; a subset of the approved set.
template <Valuation V>
std::vector<int> marginal_gain_set(const V& val, const Bundle& s) {
  std::vector<int> out;
  for (int g : val.approved()) {
    if (val.marginal(s, g) == 1) out.push_back(g);
  }
  return out;
}

template <Valuation V>
struct Instance {
  std::vector<ItemType> items;
  std::vector<Agent> agents;
  std::vector<V> valuations;  // one per agent

  int num_types() const { return static_cast<int>(items.size()); }
  int num_agents() const { return static_cast<int>(agents.size()); }
  long long seat_total() const { return total_capacity(items); }
};

using StructuredInstance = Instance<StructuredValuation>;
using ConstraintInstance = Instance<ConstraintValuation>;

}  // namespace fairalloc

#endif  // FAIRALLOC_VALUATION_HPP_
