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

#ifndef FAIRALLOC_SYNTH_HPP_
#define FAIRALLOC_SYNTH_HPP_

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairalloc/distributions.hpp"
#include "fairalloc/rng.hpp"
#include "fairalloc/types.hpp"

namespace fairalloc {

// Binary response matrix: ell simulated approval draws per course.
struct DataMatrix {
  int ell = 0;
  int m = 0;
  std::vector<std::uint8_t> bits;  // row-major

  std::uint8_t at(int row, int col) const { return bits[static_cast<std::size_t>(row) * m + col]; }
};

// Multivariate-Beta posterior for one respondent: Beta marginals tied
// together by a Gaussian copula over the posterior correlation matrix.
struct PosteriorModel {
  double nu = 0.0;
  Eigen::VectorXd mu;
  Eigen::MatrixXd A;      // moment matrix
  Eigen::MatrixXd Sigma;  // covariance
  Eigen::MatrixXd R;      // correlation, repaired to be factorizable
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  Eigen::MatrixXd copula_sqrt;  // symmetric square root of R

  int dim() const { return static_cast<int>(mu.size()); }
};

struct MBetaPrior {
  double nu = 0.0;
  Eigen::VectorXd mu;
  Eigen::MatrixXd R;

  // The default prior: nu = 1/1000, uniform means, independent coordinates.
  static MBetaPrior standard(int m) {
    MBetaPrior prior;
    prior.nu = 1.0 / 1000.0;
    prior.mu = Eigen::VectorXd::Constant(m, 0.5);
    prior.R = Eigen::MatrixXd::Identity(m, m);
    return prior;
  }
};

// Affine map of survey responses onto approval probabilities: the default
// rating 1 maps to 0, the "required" rating 8 maps to 1.
inline Eigen::VectorXd normalize_ratings(const std::vector<int>& ratings) {
  Eigen::VectorXd theta(ratings.size());
  for (std::size_t g = 0; g < ratings.size(); ++g) {
    if (ratings[g] < kMinRating || ratings[g] > kMaxRating) {
      throw std::invalid_argument("normalize_ratings: rating out of range");
    }
    theta[static_cast<int>(g)] = (ratings[g] - 1) / 7.0;
  }
  return theta;
}

inline DataMatrix sample_data_matrix(const Eigen::VectorXd& theta, int ell, Rng& rng) {
  if (ell < 1) throw std::invalid_argument("sample_data_matrix: ell must be >= 1");
  DataMatrix d;
  d.ell = ell;
  d.m = static_cast<int>(theta.size());
  d.bits.resize(static_cast<std::size_t>(ell) * d.m);
  for (int j = 0; j < ell; ++j) {
    for (int g = 0; g < d.m; ++g) {
      d.bits[static_cast<std::size_t>(j) * d.m + g] = bernoulli(rng, theta[g]) ? 1 : 0;
    }
  }
  return d;
}

// Sum of row outer products; equal to the bit-column expansion H diag(d) H^T
// without materializing the exponentially wide H.
inline Eigen::MatrixXd update_matrix(const DataMatrix& d) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(d.m, d.m);
  for (int j = 0; j < d.ell; ++j) {
    for (int a = 0; a < d.m; ++a) {
      if (!d.at(j, a)) continue;
      for (int b = 0; b < d.m; ++b) {
        if (d.at(j, b)) u(a, b) += 1.0;
      }
    }
  }
  return u;
}

namespace detail {

inline Eigen::MatrixXd prior_moment_matrix(const MBetaPrior& prior) {
  const Eigen::VectorXd v_diag =
      (prior.mu.array() * (1.0 - prior.mu.array())).matrix() / (prior.nu + 1.0);
  const Eigen::VectorXd v_sqrt = v_diag.array().sqrt();
  const Eigen::MatrixXd sigma = v_sqrt.asDiagonal() * prior.R * v_sqrt.asDiagonal();
  return prior.nu * ((prior.nu + 1.0) * sigma + prior.mu * prior.mu.transpose());
}

// Nearest-correlation repair: clip eigenvalues from below, then renormalize
// the diagonal back to ones.
inline Eigen::MatrixXd repair_correlation(const Eigen::MatrixXd& r) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r);
  if (eig.info() != Eigen::Success) throw std::runtime_error("correlation eigendecomposition failed");
  Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(1e-10);
  Eigen::MatrixXd fixed = eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
  Eigen::VectorXd scale = fixed.diagonal().cwiseSqrt().cwiseInverse();
  fixed = scale.asDiagonal() * fixed * scale.asDiagonal();
  fixed = 0.5 * (fixed + fixed.transpose());
  return fixed;
}

inline Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& psd) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(psd);
  if (eig.info() != Eigen::Success) throw std::runtime_error("sqrt eigendecomposition failed");
  const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lambda.array().sqrt().matrix().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace detail

// Bayesian update of the multivariate-Beta parameters from a data matrix,
// with the marginal clip and correlation repair needed to keep the copula
// factorizable under finite-sample noise.
inline PosteriorModel posterior(const MBetaPrior& prior, const DataMatrix& d) {
  const int m = d.m;
  if (static_cast<int>(prior.mu.size()) != m) {
    throw std::invalid_argument("posterior: prior dimension differs from data");
  }
  PosteriorModel model;
  model.nu = prior.nu + d.ell;
  model.A = detail::prior_moment_matrix(prior) + update_matrix(d);
  model.mu = model.A.diagonal() / model.nu;

  constexpr double kMarginClip = 1e-9;
  Eigen::VectorXd mu_safe = model.mu.cwiseMax(kMarginClip).cwiseMin(1.0 - kMarginClip);

  model.Sigma = (model.A / model.nu - model.mu * model.mu.transpose()) / (model.nu + 1.0);
  const Eigen::VectorXd v_diag =
      (mu_safe.array() * (1.0 - mu_safe.array())).matrix() / (model.nu + 1.0);
  const Eigen::VectorXd v_inv_sqrt = v_diag.array().sqrt().inverse();
  model.R = v_inv_sqrt.asDiagonal() * model.Sigma * v_inv_sqrt.asDiagonal();
  model.R = 0.5 * (model.R + model.R.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.R);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < 1e-10) {
    model.R = detail::repair_correlation(model.R);
  }
  model.copula_sqrt = detail::symmetric_sqrt(model.R);

  model.alpha = model.nu * mu_safe;
  model.beta = Eigen::VectorXd::Constant(m, model.nu) - model.alpha;
  for (int g = 0; g < m; ++g) {
    if (!(model.alpha[g] > 0.0) || !(model.beta[g] > 0.0)) {
      throw std::runtime_error("posterior: degenerate Beta marginal");
    }
  }
  return model;
}

// One preference-vector draw: correlated Gaussians through the probability
// integral transform into the Beta marginals.
inline Eigen::VectorXd sample_synthetic(const PosteriorModel& model, Rng& rng) {
  const int m = model.dim();
  Eigen::VectorXd z(m);
  for (int g = 0; g < m; ++g) z[g] = standard_normal(rng);
  const Eigen::VectorXd correlated = model.copula_sqrt * z;
  Eigen::VectorXd sigma(m);
  for (int g = 0; g < m; ++g) {
    sigma[g] = inverse_beta_cdf(model.alpha[g], model.beta[g], normal_cdf(correlated[g]));
  }
  return sigma;
}

// Back onto the 1..8 survey scale; the scale has no 0, so rounded zeros clamp
// up to the default rating.
inline std::vector<int> to_response(const Eigen::VectorXd& sigma) {
  std::vector<int> ratings(sigma.size());
  for (int g = 0; g < static_cast<int>(sigma.size()); ++g) {
    if (sigma[g] < 0.0 || sigma[g] > 1.0) throw std::invalid_argument("to_response: value outside [0,1]");
    ratings[g] = std::max<long>(kMinRating, std::lround(8.0 * sigma[g]));
  }
  return ratings;
}

// Kernel-density model of one academic cohort: a uniform mixture of the
// respondents' posteriors plus a multinomial over their schedule sizes.
struct StatusPopulation {
  Status status = Status::kFreshman;
  std::vector<PosteriorModel> kernels;
  std::vector<int> course_max_values;
  std::vector<double> course_max_probs;
};

inline StatusPopulation fit_status_population(const std::vector<Agent>& respondents, Status status,
                                              int ell, Rng& rng) {
  StatusPopulation pop;
  pop.status = status;
  std::map<int, int> course_max_counts;
  for (const Agent& a : respondents) {
    if (a.status != status) continue;
    const DataMatrix d = sample_data_matrix(normalize_ratings(a.ratings), ell, rng);
    pop.kernels.push_back(posterior(MBetaPrior::standard(d.m), d));
    ++course_max_counts[a.course_max];
  }
  if (pop.kernels.empty()) {
    throw std::invalid_argument(std::string("fit_status_population: no respondents with status ") +
                                status_name(status));
  }
  for (const auto& [value, count] : course_max_counts) {
    pop.course_max_values.push_back(value);
    pop.course_max_probs.push_back(static_cast<double>(count) /
                                   static_cast<double>(pop.kernels.size()));
  }
  return pop;
}

// Draws synthetic respondents: uniform kernel choice, one copula draw mapped
// back to the survey scale, and an independent schedule-size draw.
inline std::vector<Agent> sample_population(const StatusPopulation& pop, int count, Rng& rng,
                                            int label_seq_start = 0) {
  if (pop.kernels.empty()) throw std::invalid_argument("sample_population: empty population");
  std::vector<Agent> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const std::size_t kernel = uniform_index(rng, pop.kernels.size());
    Agent a;
    a.status = pop.status;
    a.label = std::string("syn_") + status_name(pop.status) + "_" +
              std::to_string(label_seq_start + k);
    a.ratings = to_response(sample_synthetic(pop.kernels[kernel], rng));
    a.course_max = pop.course_max_values[sample_discrete(rng, pop.course_max_probs)];
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace fairalloc

#endif  // FAIRALLOC_SYNTH_HPP_
