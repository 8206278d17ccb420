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

// Affine-invariant ensemble MCMC with the stretch move.
//
// All updates are sequential within a sweep (walker i sees the already-updated
// walkers j < i), which makes every run a deterministic function of the seed.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gpsur/types.hpp"

namespace gpsur {

/// Unnormalized log density. NaN and -inf are both treated as "reject".
using LogDensity = std::function<double(const ParamVector&)>;

inline constexpr double kDefaultStretch = 2.0;

struct EnsembleState {
  PointMatrix walkers;           // W x n, one walker per row
  Eigen::VectorXd log_target;    // cached target at each walker; empty until evaluated
  std::uint64_t step_index = 0;  // completed sweeps
  Rng rng;
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  std::uint64_t nan_rejections = 0;

  std::size_t walker_count() const { return static_cast<std::size_t>(walkers.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(walkers.cols()); }
  bool evaluated() const { return log_target.size() == walkers.rows(); }
};

struct ChainSamples {
  PointMatrix samples;        // pooled post-burn-in positions, sweep-major
  Eigen::VectorXd log_target;
  std::vector<std::uint8_t> accepted;  // move of this walker in this sweep was accepted
  std::size_t walker_count = 0;
  std::size_t burn_in_used = 0;
  std::size_t sweeps = 0;
  double acceptance_fraction = 0.0;  // over every sweep, burn-in included
  std::uint64_t nan_rejections = 0;
  std::string warning;  // non-empty for degenerate runs

  std::size_t size() const { return static_cast<std::size_t>(samples.rows()); }
  std::size_t post_burn_in_sweeps() const { return walker_count ? size() / walker_count : 0; }
};

/// Ensemble of `count` i.i.d. Gaussian walkers. Requires count >= 2n.
EnsembleState init_walkers(std::size_t count, const ParamVector& center,
                           const Eigen::MatrixXd& spread, std::uint64_t seed);

/// Ensemble from explicit positions (count >= 2n).
EnsembleState make_ensemble(PointMatrix walkers, std::uint64_t seed);

/// Fill the cached log-target values.
void evaluate_walkers(EnsembleState& state, const LogDensity& log_target);

/// Inverse-CDF map of u in [0,1] to the stretch scale with density ~ 1/sqrt(z) on [1/a, a].
double stretch_scale(double a, double u);

/// One draw of the stretch scale; a must be > 1.
double sample_z(double a, Rng& rng);

/// One full sequential sweep over all walkers.
void stretch_move(EnsembleState& state, const LogDensity& log_target, double a = kDefaultStretch);

/// Advance `state` by n_sweeps and pool the walker positions after the first
/// burn_in sweeps. Attaches a warning when the acceptance rate is below 1%.
ChainSamples run_chain(EnsembleState& state, const LogDensity& log_target, std::size_t n_sweeps,
                       std::size_t burn_in, double a = kDefaultStretch);

/// Default burn-in: 20% of the sweeps.
inline std::size_t default_burn_in(std::size_t n_sweeps) { return n_sweeps / 5; }

/// CSV with header theta_0..theta_{n-1},log_target,accepted.
void write_chain_csv(const std::string& path, const ChainSamples& chain);
ChainSamples read_chain_csv(const std::string& path, std::size_t walker_count);

}  // namespace gpsur
