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

#ifndef FAIRALLOC_RNG_HPP_
#define FAIRALLOC_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace fairalloc {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent generator for a pipeline stage, so that e.g. pick
// ordering and synthetic sampling never share draws.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(splitmix64(splitmix64(seed) ^ (0xda3e39cb94b95bdbULL * (stream + 1))));
}

// The std:: distribution objects are implementation-defined; everything below
// is pinned so seeded runs stay byte-identical across standard libraries.

inline std::uint64_t uniform_u64_below(Rng& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_u64_below: n must be positive");
  const std::uint64_t rem = std::numeric_limits<std::uint64_t>::max() % n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
  std::uint64_t x;
  do {
    x = rng();
  } while (x > limit);
  return x % n;
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform_u64_below(rng, n));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

// Box-Muller; draws two uniforms per variate and keeps no spare state.
inline double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

template <typename T>
void shuffle(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[uniform_index(rng, i)]);
  }
}

// Single draw from a finite distribution given by nonnegative weights.
inline std::size_t sample_discrete(Rng& rng, const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw std::invalid_argument("sample_discrete: weights must sum to > 0");
  double u = uniform01(rng) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0.0) return i;
  }
  return weights.size() - 1;
}

}  // namespace fairalloc

#endif  // FAIRALLOC_RNG_HPP_
