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

#ifndef FAIRALLOC_TYPES_HPP_
#define FAIRALLOC_TYPES_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairalloc/rng.hpp"

namespace fairalloc {

// Academic standing; enrollment priority increases with the enum value.
enum class Status : int {
  kFreshman = 0,
  kSophomore = 1,
  kJunior = 2,
  kSenior = 3,
  kMS = 4,
  kPhD = 5,
};

inline constexpr int kNumStatuses = 6;
inline constexpr int kMinRating = 1;
inline constexpr int kMaxRating = 8;

inline int priority_of(Status s) { return static_cast<int>(s); }

inline bool is_graduate(Status s) { return s == Status::kMS || s == Status::kPhD; }

// Department cap on schedule size, by standing.
inline int status_course_limit(Status s) { return is_graduate(s) ? 4 : 6; }

inline const char* status_name(Status s) {
  switch (s) {
    case Status::kFreshman: return "Freshman";
    case Status::kSophomore: return "Sophomore";
    case Status::kJunior: return "Junior";
    case Status::kSenior: return "Senior";
    case Status::kMS: return "MS";
    case Status::kPhD: return "PhD";
  }
  return "?";
}

// A course section with `capacity` interchangeable seats. Two items conflict
// exactly when they share a slot id.
struct ItemType {
  int id = 0;
  std::string catalog_label;
  std::string section_label;
  int slot = 0;
  int capacity = 1;
};

inline long long total_capacity(const std::vector<ItemType>& items) {
  long long total = 0;
  for (const auto& it : items) total += it.capacity;
  return total;
}

inline std::vector<int> capacity_vector(const std::vector<ItemType>& items) {
  std::vector<int> q(items.size());
  for (std::size_t g = 0; g < items.size(); ++g) q[g] = items[g].capacity;
  return q;
}

struct Agent {
  int id = 0;
  std::string label;  // external identifier used in reports
  Status status = Status::kFreshman;
  std::vector<int> ratings;  // one value in 1..8 per item type
  int course_max = 1;
};

// Per-type copy counts; the unit of ownership.
class Bundle {
 public:
  Bundle() = default;
  explicit Bundle(int num_types) : counts_(num_types, 0) {}

  int num_types() const { return static_cast<int>(counts_.size()); }
  int count(int g) const { return counts_[g]; }
  int& operator[](int g) { return counts_[g]; }
  int operator[](int g) const { return counts_[g]; }

  // 1-norm: total number of copies held.
  int size() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }
  bool empty() const { return size() == 0; }

  void add(int g) { ++counts_[g]; }
  void remove(int g) {
    if (counts_[g] <= 0) throw std::invalid_argument("Bundle::remove: no copy to remove");
    --counts_[g];
  }

  Bundle plus(int g) const {
    Bundle b = *this;
    b.add(g);
    return b;
  }
  Bundle minus(int g) const {
    Bundle b = *this;
    b.remove(g);
    return b;
  }

  // Componentwise partial order.
  bool leq(const Bundle& other) const {
    for (int g = 0; g < num_types(); ++g) {
      if (counts_[g] > other.counts_[g]) return false;
    }
    return true;
  }

  friend bool operator==(const Bundle&, const Bundle&) = default;

 private:
  std::vector<int> counts_;
};

inline Bundle operator+(const Bundle& a, const Bundle& b) {
  Bundle out = a;
  for (int g = 0; g < a.num_types(); ++g) out[g] += b[g];
  return out;
}

// Row 0 is the unassigned pool; row i+1 is agent i's bundle. A valid
// allocation conserves every column sum at the item's capacity.
class Allocation {
 public:
  Allocation() = default;
  Allocation(const std::vector<ItemType>& items, int num_agents)
      : rows_(num_agents + 1, Bundle(static_cast<int>(items.size()))) {
    for (const auto& it : items) rows_[0][it.id] = it.capacity;
  }

  int num_agents() const { return static_cast<int>(rows_.size()) - 1; }
  int num_types() const { return rows_.empty() ? 0 : rows_[0].num_types(); }

  static constexpr int pool_row() { return 0; }
  static constexpr int agent_row(int agent_id) { return agent_id + 1; }

  const Bundle& pool() const { return rows_[0]; }
  const Bundle& of(int agent_id) const { return rows_[agent_id + 1]; }
  const Bundle& row(int r) const { return rows_[r]; }

  // Half-moves. Column conservation is the caller's obligation between the
  // two halves; agent rows never hold more than one copy of the same type.
  void add_copy(int row, int g) {
    if (row != pool_row() && rows_[row][g] >= 1) {
      throw std::invalid_argument("add_copy: agent already holds a copy");
    }
    ++rows_[row][g];
  }
  void remove_copy(int row, int g) {
    if (rows_[row][g] < 1) throw std::invalid_argument("remove_copy: no copy to remove");
    --rows_[row][g];
  }

  // Moves one copy of g between rows.
  void transfer(int from_row, int to_row, int g) {
    if (from_row == to_row) throw std::invalid_argument("transfer: rows must differ");
    if (rows_[from_row][g] < 1) throw std::invalid_argument("transfer: no copy to move");
    if (to_row != pool_row() && rows_[to_row][g] >= 1) {
      throw std::invalid_argument("transfer: agent already holds a copy");
    }
    --rows_[from_row][g];
    ++rows_[to_row][g];
  }

  bool is_valid(const std::vector<ItemType>& items) const {
    if (static_cast<int>(items.size()) != num_types()) return false;
    for (const auto& it : items) {
      int column = 0;
      for (const auto& r : rows_) {
        if (r[it.id] < 0) return false;
        column += r[it.id];
      }
      if (column != it.capacity) return false;
      for (int i = 0; i < num_agents(); ++i) {
        if (of(i)[it.id] > 1) return false;
      }
    }
    return true;
  }

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<Bundle> rows_;
};

inline Allocation allocation_new(const std::vector<ItemType>& items, int num_agents) {
  return Allocation(items, num_agents);
}

// Agent sequence sorted by priority, shuffled within each standing by a
// seeded permutation. rank[i] is agent i's position.
struct PickOrder {
  std::vector<int> order;
  std::vector<int> rank;
};

inline PickOrder make_pick_order(const std::vector<Agent>& agents, std::uint64_t seed) {
  Rng rng = make_rng(seed, /*stream=*/1);
  PickOrder out;
  out.rank.assign(agents.size(), 0);
  for (int p = kNumStatuses - 1; p >= 0; --p) {
    std::vector<int> group;
    for (const auto& a : agents) {
      if (priority_of(a.status) == p) group.push_back(a.id);
    }
    shuffle(group, rng);
    for (int id : group) out.order.push_back(id);
  }
  for (std::size_t pos = 0; pos < out.order.size(); ++pos) out.rank[out.order[pos]] = static_cast<int>(pos);
  return out;
}

}  // namespace fairalloc

#endif  // FAIRALLOC_TYPES_HPP_
