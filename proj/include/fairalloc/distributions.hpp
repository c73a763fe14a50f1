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

#ifndef FAIRALLOC_DISTRIBUTIONS_HPP_
#define FAIRALLOC_DISTRIBUTIONS_HPP_

#include <cmath>
#include <stdexcept>
#include <utility>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace fairalloc {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730951); }

// Regularized incomplete beta I_x(a, b).
inline double beta_cdf(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

// Quantile of Beta(a, b) by bracketed root finding on the regularized
// incomplete beta, to absolute tolerance 1e-10 on the argument. That is far
// below the 1/8 response quantization this feeds.
inline double inverse_beta_cdf(double a, double b, double p) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("inverse_beta_cdf: shapes must be positive");
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const auto f = [&](double x) { return beta_cdf(a, b, x) - p; };
  const auto done = [](double lo, double hi) { return hi - lo < 1e-10; };
  std::uintmax_t max_iter = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(f, 0.0, 1.0, -p, 1.0 - p, done, max_iter);
  return 0.5 * (lo + hi);
}

}  // namespace fairalloc

#endif  // FAIRALLOC_DISTRIBUTIONS_HPP_
