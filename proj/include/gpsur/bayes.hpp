/*
 * Copyright 2026 The gpsurrogate Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Densities of the inverse problem: Gaussian log-likelihood of the forward
// model, the Gaussian prior built from a preliminary chain, the true posterior
// and the GP-augmented surrogate posterior exp(mu_GP) * prior.

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "gpsur/ensemble_sampler.hpp"
#include "gpsur/gp.hpp"
#include "gpsur/network.hpp"
#include "gpsur/types.hpp"

namespace gpsur {

/// Added to the log prior when a positivity-constrained coordinate is <= 0.
inline constexpr double kPositivityPenalty = -1e12;

enum class ParamKind { kPreExponential, kActivationEnergy };

struct FreeParameter {
  std::size_t edge;
  ParamKind kind;
  std::string name;  // "A_i_j" or "E_i_j"
};

/// Maps a parameter vector onto the network's rate parameters; coordinates
/// that are not free stay at their base (truth) values.
class ParameterMap {
 public:
  ParameterMap(const ReactionNetwork& net, RateParams base, const std::vector<std::string>& names);

  std::size_t dim() const noexcept { return free_.size(); }
  const std::vector<FreeParameter>& free() const noexcept { return free_; }
  const RateParams& base() const noexcept { return base_; }

  RateParams to_rates(const ParamVector& theta) const;
  /// Base values of the free coordinates.
  ParamVector base_vector() const;
  /// True for pre-exponential coordinates.
  std::vector<bool> positivity_mask() const;
  std::vector<std::string> names() const;

 private:
  RateParams base_;
  std::vector<FreeParameter> free_;
};

class GaussianPrior {
 public:
  GaussianPrior(ParamVector mean, Eigen::MatrixXd covariance, std::vector<bool> positivity_mask,
                double inflation = 1.0);

  const ParamVector& mean() const noexcept { return mean_; }
  const Eigen::MatrixXd& covariance() const noexcept { return cov_; }
  const std::vector<bool>& positivity_mask() const noexcept { return mask_; }
  double inflation() const noexcept { return inflation_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean_.size()); }
  Eigen::MatrixXd lower_factor() const { return llt_.matrixL(); }

  /// Gaussian log-density plus the positivity penalty.
  double log_density(const ParamVector& theta) const;

 private:
  ParamVector mean_;
  Eigen::MatrixXd cov_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  std::vector<bool> mask_;
  double inflation_;
  double log_normalizer_;
};

inline double log_prior(const GaussianPrior& prior, const ParamVector& theta) {
  return prior.log_density(theta);
}

struct TruePosteriorTarget {
  std::shared_ptr<const ForwardModel> model;
  ParameterMap params;
  std::vector<ExperimentCondition> experiments;
  std::vector<double> observations;
  double noise_var;
  GaussianPrior prior;
  /// Number of log_likelihood evaluations (one forward solve per experiment each).
  std::shared_ptr<std::atomic<std::uint64_t>> likelihood_calls =
      std::make_shared<std::atomic<std::uint64_t>>(0);

  std::size_t dim() const { return params.dim(); }
  /// Same data and likelihood with a different prior; shares the call counter.
  TruePosteriorTarget with_prior(GaussianPrior p) const;
};

/// Gaussian log-likelihood; -inf when any model output is the infinite-time sentinel.
double log_likelihood(const TruePosteriorTarget& target, const ParamVector& theta);
double log_true_posterior(const TruePosteriorTarget& target, const ParamVector& theta);

struct SurrogatePosterior {
  GaussianPrior prior;
  GpModel gp;
  /// Constant added to the log density (scale of the unnormalized surrogate).
  double log_offset = 0.0;
};

/// mu_GP(theta) + log_prior(theta) + log_offset.
double log_surrogate_posterior(const SurrogatePosterior& s, const ParamVector& theta);

struct PriorBuildConfig {
  std::size_t walkers = 0;  // 0: 2n
  std::size_t sweeps = 5000;
  std::size_t burn_in = 1000;
  double stretch_a = kDefaultStretch;
  ParamVector init_center;       // walker initialization
  Eigen::MatrixXd init_spread;
  double inflation = 2.0;
};

struct PriorBuildResult {
  GaussianPrior prior;
  Eigen::MatrixXd sample_covariance;  // before inflation
  ChainSamples chain;
  /// Log-likelihood of every point the chain evaluated, accepted or not
  /// (non-finite values are skipped).
  std::vector<double> proposal_log_likelihoods;
};

/// Run a preliminary chain on the true posterior and fit a Gaussian to it.
PriorBuildResult build_gaussian_prior(const TruePosteriorTarget& target,
                                      const PriorBuildConfig& cfg, std::uint64_t seed);

/// Gaussian prior from a sample set: mean, inflation * covariance (symmetrized,
/// repaired to SPD when needed). Throws NumericalError when rank-deficient.
GaussianPrior gaussian_from_samples(const PointMatrix& samples, double inflation,
                                    std::vector<bool> mask,
                                    Eigen::MatrixXd* sample_covariance = nullptr);

}  // namespace gpsur
