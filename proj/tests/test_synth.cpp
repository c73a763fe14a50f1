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

#include <catch2/catch_amalgamated.hpp>

#include "fairalloc/distributions.hpp"
#include "fairalloc/synth.hpp"

using namespace fairalloc;

namespace {

// Explicit exponential-size construction of the update matrix: H holds every
// length-m bit vector as a column and Lambda counts data rows per pattern.
Eigen::MatrixXd update_matrix_via_bit_columns(const DataMatrix& d) {
  const int m = d.m;
  const int w = 1 << m;
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(w);
  for (int j = 0; j < d.ell; ++j) {
    int pattern = 0;
    for (int g = 0; g < m; ++g) pattern |= d.at(j, g) << g;
    lambda[pattern] += 1.0;
  }
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(m, m);
  for (int pattern = 0; pattern < w; ++pattern) {
    if (lambda[pattern] == 0.0) continue;
    Eigen::VectorXd y(m);
    for (int g = 0; g < m; ++g) y[g] = (pattern >> g) & 1;
    u += lambda[pattern] * y * y.transpose();
  }
  return u;
}

DataMatrix matrix_from_rows(const std::vector<std::vector<std::uint8_t>>& rows) {
  DataMatrix d;
  d.ell = static_cast<int>(rows.size());
  d.m = static_cast<int>(rows[0].size());
  for (const auto& row : rows) {
    for (std::uint8_t bit : row) d.bits.push_back(bit);
  }
  return d;
}

}  // namespace

TEST_CASE("rating normalization is the affine map onto [0,1]") {
  const Eigen::VectorXd theta = normalize_ratings({1, 8, 4});
  CHECK(theta[0] == 0.0);
  CHECK(theta[1] == 1.0);
  CHECK(theta[2] == Catch::Approx(3.0 / 7.0));
  for (int r = 1; r <= 8; ++r) {
    // Inverse round-trip of the affine map.
    CHECK(normalize_ratings({r})[0] * 7.0 + 1.0 == Catch::Approx(r));
  }
  CHECK_THROWS_AS(normalize_ratings({0}), std::invalid_argument);
}

TEST_CASE("data matrix sampling") {
  Rng rng = make_rng(71);
  SECTION("degenerate probabilities") {
    const auto zeros = sample_data_matrix(Eigen::VectorXd::Zero(3), 5, rng);
    const auto ones = sample_data_matrix(Eigen::VectorXd::Ones(3), 5, rng);
    for (int j = 0; j < 5; ++j) {
      for (int g = 0; g < 3; ++g) {
        CHECK(zeros.at(j, g) == 0);
        CHECK(ones.at(j, g) == 1);
      }
    }
  }
  SECTION("column means concentrate") {
    const int ell = 10000;
    const auto d = sample_data_matrix(Eigen::VectorXd::Constant(1, 0.5), ell, rng);
    double mean = 0;
    for (int j = 0; j < ell; ++j) mean += d.at(j, 0);
    mean /= ell;
    CHECK(std::abs(mean - 0.5) < 0.02);
  }
  SECTION("seeded draws are reproducible") {
    Rng a = make_rng(5, 9), b = make_rng(5, 9);
    const Eigen::VectorXd theta = Eigen::VectorXd::Constant(4, 0.3);
    CHECK(sample_data_matrix(theta, 20, a).bits == sample_data_matrix(theta, 20, b).bits);
  }
}

TEST_CASE("update matrix equals the bit-column expansion") {
  SECTION("hand cases") {
    CHECK(update_matrix(matrix_from_rows({{0, 0}, {0, 0}})) == Eigen::MatrixXd::Zero(2, 2));
    const auto u = update_matrix(matrix_from_rows({{1, 1}, {1, 0}}));
    Eigen::MatrixXd expected(2, 2);
    expected << 2, 1, 1, 1;
    CHECK(u == expected);
  }
  SECTION("random cases across dimensions") {
    Rng rng = make_rng(72);
    for (int trial = 0; trial < 30; ++trial) {
      const int m = 1 + static_cast<int>(uniform_index(rng, 12));
      const int ell = 1 + static_cast<int>(uniform_index(rng, 30));
      Eigen::VectorXd theta(m);
      for (int g = 0; g < m; ++g) theta[g] = uniform01(rng);
      const auto d = sample_data_matrix(theta, ell, rng);
      REQUIRE(update_matrix(d) == update_matrix_via_bit_columns(d));
    }
  }
}

TEST_CASE("posterior arithmetic") {
  Rng rng = make_rng(73);
  SECTION("shape parameter accumulates the sample count") {
    const auto d = sample_data_matrix(Eigen::VectorXd::Constant(2, 0.4), 100, rng);
    const auto model = posterior(MBetaPrior::standard(2), d);
    CHECK(model.nu == Catch::Approx(100.001).epsilon(1e-12));
  }
  SECTION("single all-ones column concentrates the mean") {
    const auto d = matrix_from_rows({{1}, {1}, {1}, {1}, {1}, {1}, {1}, {1}, {1}, {1}});
    const auto model = posterior(MBetaPrior::standard(1), d);
    CHECK(model.mu[0] == Catch::Approx((0.001 * 0.5 + 10.0) / 10.001).epsilon(1e-12));
  }
  SECTION("posterior identities on random data") {
    for (int trial = 0; trial < 20; ++trial) {
      const int m = 1 + static_cast<int>(uniform_index(rng, 6));
      Eigen::VectorXd theta(m);
      for (int g = 0; g < m; ++g) theta[g] = uniform01(rng);
      const int ell = 1 + static_cast<int>(uniform_index(rng, 40));
      const auto d = sample_data_matrix(theta, ell, rng);
      const auto model = posterior(MBetaPrior::standard(m), d);

      REQUIRE(model.nu == Catch::Approx(0.001 + ell).epsilon(1e-12));
      for (int g = 0; g < m; ++g) {
        REQUIRE(model.mu[g] == Catch::Approx(model.A(g, g) / model.nu).epsilon(1e-12));
        REQUIRE(model.alpha[g] / (model.alpha[g] + model.beta[g]) ==
                Catch::Approx(model.mu[g]).epsilon(1e-12));
        REQUIRE(model.alpha[g] > 0.0);
        REQUIRE(model.beta[g] > 0.0);
        REQUIRE(model.R(g, g) == Catch::Approx(1.0).margin(1e-9));
        for (int h = 0; h < m; ++h) {
          REQUIRE(model.R(g, h) == Catch::Approx(model.R(h, g)).margin(1e-9));
          REQUIRE(std::abs(model.R(g, h)) <= 1.0 + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("correlation repair recovers a factorizable matrix") {
  Eigen::MatrixXd bad(3, 3);
  bad << 1.0, 0.9, 0.9,
         0.9, 1.0, -0.9,
         0.9, -0.9, 1.0;  // indefinite
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> before(bad);
  REQUIRE(before.eigenvalues().minCoeff() < 0.0);

  const Eigen::MatrixXd fixed = fairalloc::detail::repair_correlation(bad);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> after(fixed);
  CHECK(after.eigenvalues().minCoeff() >= 0.0);
  for (int g = 0; g < 3; ++g) {
    CHECK(fixed(g, g) == Catch::Approx(1.0).margin(1e-12));
    for (int h = 0; h < 3; ++h) {
      CHECK(fixed(g, h) == Catch::Approx(fixed(h, g)).margin(1e-12));
      CHECK(std::abs(fixed(g, h)) <= 1.0 + 1e-9);
    }
  }
  // The square root reproduces the repaired matrix.
  const Eigen::MatrixXd root = fairalloc::detail::symmetric_sqrt(fixed);
  CHECK(((root * root) - fixed).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("inverse beta cdf inverts the cdf") {
  Rng rng = make_rng(74);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = 0.05 + 20.0 * uniform01(rng);
    const double b = 0.05 + 20.0 * uniform01(rng);
    const double p = uniform01(rng);
    const double x = inverse_beta_cdf(a, b, p);
    CHECK(beta_cdf(a, b, x) == Catch::Approx(p).margin(1e-7));
  }
  CHECK(inverse_beta_cdf(2.0, 3.0, 0.0) == 0.0);
  CHECK(inverse_beta_cdf(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("copula sampling matches its marginals") {
  Rng rng = make_rng(75);
  Eigen::VectorXd theta(3);
  theta << 0.2, 0.5, 0.9;
  const auto d = sample_data_matrix(theta, 60, rng);
  const auto model = posterior(MBetaPrior::standard(3), d);

  const int draws = 20000;
  Eigen::MatrixXd samples(draws, 3);
  for (int s = 0; s < draws; ++s) samples.row(s) = sample_synthetic(model, rng).transpose();

  for (int g = 0; g < 3; ++g) {
    const double mean = samples.col(g).mean();
    const double expected = model.alpha[g] / (model.alpha[g] + model.beta[g]);
    const double var = expected * (1 - expected) / (model.alpha[g] + model.beta[g] + 1);
    CHECK(std::abs(mean - expected) < 3.0 * std::sqrt(var / draws) + 1e-6);
  }
}

TEST_CASE("identity copula gives independent coordinates") {
  PosteriorModel model;
  model.nu = 10.0;
  model.mu = Eigen::VectorXd::Constant(2, 0.5);
  model.alpha = Eigen::VectorXd::Constant(2, 5.0);
  model.beta = Eigen::VectorXd::Constant(2, 5.0);
  model.R = Eigen::MatrixXd::Identity(2, 2);
  model.copula_sqrt = Eigen::MatrixXd::Identity(2, 2);

  Rng rng = make_rng(76);
  const int draws = 100000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  double median_hits = 0;
  for (int s = 0; s < draws; ++s) {
    const auto v = sample_synthetic(model, rng);
    sx += v[0];
    sy += v[1];
    sxx += v[0] * v[0];
    syy += v[1] * v[1];
    sxy += v[0] * v[1];
    if (v[0] < 0.5) median_hits += 1;
  }
  const double corr = (sxy / draws - (sx / draws) * (sy / draws)) /
                      std::sqrt((sxx / draws - (sx / draws) * (sx / draws)) *
                                (syy / draws - (sy / draws) * (sy / draws)));
  CHECK(std::abs(corr) < 0.02);
  // alpha == beta: symmetric about one half.
  CHECK(std::abs(median_hits / draws - 0.5) < 0.02);
}

TEST_CASE("responses round the preference vector onto the survey scale") {
  Eigen::VectorXd sigma(3);
  sigma << 1.0, 0.0, 0.5;
  CHECK(to_response(sigma) == std::vector<int>{8, 1, 4});
}

TEST_CASE("population sampling") {
  Rng rng = make_rng(77);
  std::vector<Agent> respondents;
  for (int i = 0; i < 3; ++i) {
    Agent a;
    a.id = i;
    a.label = "r" + std::to_string(i);
    a.status = Status::kJunior;
    a.ratings = {8, 8, 1, 1, 5};
    a.course_max = 2 + i;
    respondents.push_back(a);
  }

  SECTION("zero count gives empty output") {
    const auto pop = fit_status_population(respondents, Status::kJunior, 30, rng);
    CHECK(sample_population(pop, 0, rng).empty());
  }
  SECTION("near-degenerate kernels reproduce the source ratings") {
    const auto pop = fit_status_population(respondents, Status::kJunior, 10000, rng);
    const auto synth = sample_population(pop, 40, rng);
    int close = 0, total = 0;
    for (const Agent& a : synth) {
      for (int g = 0; g < 5; ++g) {
        total += 1;
        if (std::abs(a.ratings[g] - respondents[0].ratings[g]) <= 1) close += 1;
      }
    }
    CHECK(static_cast<double>(close) / total >= 0.95);
  }
  SECTION("course max follows the fitted multinomial") {
    const auto pop = fit_status_population(respondents, Status::kJunior, 20, rng);
    std::map<int, int> counts;
    const int draws = 10000;
    for (const Agent& a : sample_population(pop, draws, rng)) counts[a.course_max] += 1;
    for (std::size_t v = 0; v < pop.course_max_values.size(); ++v) {
      const double freq = static_cast<double>(counts[pop.course_max_values[v]]) / draws;
      CHECK(std::abs(freq - pop.course_max_probs[v]) < 0.03);
    }
  }
  SECTION("unknown status throws") {
    CHECK_THROWS_AS(fit_status_population(respondents, Status::kPhD, 10, rng),
                    std::invalid_argument);
  }
  SECTION("the full pipeline is seed-reproducible") {
    const auto draw = [&] {
      Rng fit_rng = make_rng(12, 1);
      const auto pop = fit_status_population(respondents, Status::kJunior, 25, fit_rng);
      Rng sample_rng = make_rng(12, 2);
      return sample_population(pop, 10, sample_rng);
    };
    const auto a = draw();
    const auto b = draw();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].ratings == b[i].ratings);
      CHECK(a[i].course_max == b[i].course_max);
    }
  }
}
