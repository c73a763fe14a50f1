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
//
// Deterministic full-scale fixtures: a 96-course schedule totalling 7,389
// seats across 24 weekly meeting patterns, and a 700-respondent survey pool
// whose per-standing counts match the department's observed response rates.

#ifndef FAIRALLOC_TESTS_FIXTURE_HPP_
#define FAIRALLOC_TESTS_FIXTURE_HPP_

#include <array>
#include <string>
#include <vector>

#include "fairalloc/io.hpp"
#include "fairalloc/types.hpp"

namespace fixture {

using fairalloc::Agent;
using fairalloc::ItemType;
using fairalloc::Rng;
using fairalloc::Status;

inline constexpr int kNumCourses = 96;
inline constexpr int kNumSlots = 24;
inline constexpr int kSeatTotal = 7389;
inline constexpr int kGradBandStart = 60;  // ids 60..95 are graduate level

inline std::vector<ItemType> schedule() {
  std::array<int, kNumCourses> weight{};
  int weight_sum = 0;
  for (int g = 0; g < kNumCourses; ++g) {
    weight[g] = 20 + (g * 37) % 120;
    weight_sum += weight[g];
  }
  std::vector<ItemType> items;
  int assigned = 0;
  for (int g = 0; g < kNumCourses; ++g) {
    ItemType it;
    it.id = g;
    it.catalog_label = std::to_string(g < kGradBandStart ? 100 + g * 6
                                                         : 500 + (g - kGradBandStart) * 5);
    it.section_label = "01";
    it.slot = g % kNumSlots;
    it.capacity = std::max(1, kSeatTotal * weight[g] / weight_sum);
    assigned += it.capacity;
    items.push_back(std::move(it));
  }
  items.back().capacity += kSeatTotal - assigned;  // absorb rounding drift
  return items;
}

// Effective respondents per standing (sums to 700); the head counts in
// fairalloc::department_population() are the matching populations.
inline const std::array<int, fairalloc::kNumStatuses>& respondent_counts() {
  static const std::array<int, fairalloc::kNumStatuses> counts = {125, 113, 126, 117, 172, 47};
  return counts;
}

// Course-id band a standing samples its interests from.
inline std::pair<int, int> interest_band(Status s) {
  switch (s) {
    case Status::kFreshman: return {0, 30};
    case Status::kSophomore: return {0, 46};
    case Status::kJunior: return {8, 76};
    case Status::kSenior: return {16, kNumCourses};
    case Status::kMS: return {kGradBandStart - 6, kNumCourses};
    case Status::kPhD: return {kGradBandStart - 6, kNumCourses};
  }
  return {0, kNumCourses};
}

inline std::vector<Agent> respondents(std::uint64_t seed = 424242) {
  Rng rng = fairalloc::make_rng(seed, /*stream=*/11);
  std::vector<Agent> out;
  for (int s = 0; s < fairalloc::kNumStatuses; ++s) {
    const Status status = static_cast<Status>(s);
    const auto [band_lo, band_hi] = interest_band(status);
    for (int r = 0; r < respondent_counts()[s]; ++r) {
      Agent a;
      a.id = static_cast<int>(out.size());
      a.label = "r" + std::to_string(a.id);
      a.status = status;
      a.course_max = fairalloc::is_graduate(status)
                         ? 2 + static_cast<int>(fairalloc::uniform_index(rng, 3))
                         : 3 + static_cast<int>(fairalloc::uniform_index(rng, 4));
      a.ratings.assign(kNumCourses, 1);

      // Popularity-weighted interests within the standing's band.
      const int band = band_hi - band_lo;
      std::vector<double> weights(band);
      for (int g = 0; g < band; ++g) {
        weights[g] = 1.0 + ((band_lo + g) * 13) % 8;
      }
      // The first few interests anchor high, like genuinely wanted courses;
      // the tail spreads across the scale.
      const int interests = 4 + static_cast<int>(fairalloc::uniform_index(rng, 12));
      for (int pick = 0; pick < interests && pick < band; ++pick) {
        const std::size_t idx = fairalloc::sample_discrete(rng, weights);
        weights[idx] = 0.0;
        a.ratings[band_lo + static_cast<int>(idx)] =
            pick < 3 ? 5 + static_cast<int>(fairalloc::uniform_index(rng, 4))
                     : 2 + static_cast<int>(fairalloc::uniform_index(rng, 7));
      }
      out.push_back(std::move(a));
    }
  }
  return out;
}

}  // namespace fixture

#endif  // FAIRALLOC_TESTS_FIXTURE_HPP_
