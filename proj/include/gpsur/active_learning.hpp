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

// Sequential selection of GP training points.
//
// The acquisition surface is the probability-weighted predictive variance of
// the surrogate posterior, exp(2 phi) (exp(2 s) - exp(s)) with phi = log prior
// + GP mean and s = GP variance, handled in log space. It is explored with the
// ensemble sampler; the best post-burn-in sample that keeps a minimum distance
// from all existing inputs becomes the next training point.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gpsur/bayes.hpp"
#include "gpsur/diagnostics.hpp"
#include "gpsur/ensemble_sampler.hpp"

namespace gpsur {

struct AcquisitionConfig {
  std::size_t walker_count = 0;  // 0: 2n
  std::size_t search_sweeps = 2000;
  std::size_t search_burn_in = 500;
  double stretch_a = kDefaultStretch;
  double distance_factor = 0.2;
  double tie_tolerance = 1e-9;

  void validate() const;
};

/// log of the acquisition surface; -inf where the GP variance is zero.
double log_utility(const SurrogatePosterior& surrogate, const ParamVector& theta);

/// log(exp(2 v) - exp(v)) for v >= 0, stable for tiny and huge v.
double log_variance_factor(double variance);

/// True iff theta is strictly farther than factor * ell from every existing point.
bool distance_ok(const ParamVector& theta, const PointMatrix& existing, double ell, double factor);
bool distance_ok(const ParamVector& theta, const GpModel& gp, double factor);

struct Selection {
  ParamVector theta;
  double acquisition_value;
  std::size_t candidates;  // post-burn-in samples that passed the distance rule
};

/// Highest-utility search sample passing the distance rule; near-ties (within
/// tie_tolerance) are broken uniformly at random. Throws SaturationError.
Selection select_next_point(const SurrogatePosterior& surrogate, const AcquisitionConfig& cfg,
                            std::uint64_t seed);

/// Uniformly random post-burn-in sample of the surrogate posterior passing the
/// distance rule (random-selection baseline). Throws SaturationError.
Selection select_random_point(const SurrogatePosterior& surrogate, const AcquisitionConfig& cfg,
                              std::uint64_t seed);

/// per_dim^n points on an axis-aligned grid centred at the prior mean and
/// spanning +- half_width_sds prior standard deviations per coordinate.
PointMatrix init_training_grid(const GaussianPrior& prior, std::size_t per_dim,
                               double half_width_sds);

/// Walker positions of `iteration_count` randomly chosen post-burn-in sweeps,
/// exact duplicates removed.
PointMatrix init_training_from_chain(const ChainSamples& chain, std::size_t walker_count,
                                     std::size_t iteration_count, std::uint64_t seed);

enum class SelectionMode { kActive, kRandom };

struct IterationRecord {
  std::size_t iteration;  // 1-based
  ParamVector theta;
  double log_likelihood;
  double acquisition_value;
  std::size_t candidates;
};

struct TrainingHistory {
  std::vector<IterationRecord> iterations;
  std::vector<DiagnosticsRecord> diagnostics;
  std::string halt_reason;  // empty when the budget was exhausted
  std::uint64_t forward_evaluations = 0;
};

struct TrainOptions {
  std::size_t budget = 1;
  SelectionMode mode = SelectionMode::kActive;
  AcquisitionConfig acquisition;
  std::size_t diag_cadence = 0;  // 0 disables diagnostics
  DiagnosticsConfig diagnostics;
  std::uint64_t diagnostics_seed = 0;
  /// Target for diagnostics (defaults to the training target).
  const TruePosteriorTarget* diagnostics_target = nullptr;
  std::function<void(const IterationRecord&)> on_iteration;
  std::function<void(const DiagnosticsRecord&)> on_diagnostics;
};

struct TrainResult {
  SurrogatePosterior surrogate;
  TrainingHistory history;
};

/// Seed used for the diagnostics record of a given iteration.
std::uint64_t diagnostics_seed_for(std::uint64_t base, std::size_t iteration);

/// Select, evaluate and add `budget` points. Saturation halts early with the
/// reason recorded in the history.
TrainResult train_loop(const TruePosteriorTarget& target, SurrogatePosterior surrogate,
                       const TrainOptions& options, std::uint64_t seed);

/// CSV: iteration, theta_*, log_likelihood, acquisition_value, halt_reason.
void write_history_csv(const std::string& path, const TrainingHistory& history, std::size_t dim);

}  // namespace gpsur
