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

// Surrogate accuracy measures: mean absolute log-density error under samples
// of either density, and the relative second moment R = E[w^2] / E[w]^2 of the
// importance weights w = pi / pi_surrogate under surrogate samples.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gpsur/bayes.hpp"
#include "gpsur/ensemble_sampler.hpp"

namespace gpsur {

struct AbsErrorResult {
  double mean_abs = 0.0;    // raw E
  double offset_free = 0.0; // E*: mean |diff - median(diff)|
  std::size_t used = 0;
  std::size_t excluded = 0;  // samples with a non-finite log density
};

/// Mean |log_surrogate - log_true| over the sample rows.
AbsErrorResult abs_error(const PointMatrix& samples, const LogDensity& log_true,
                         const LogDensity& log_surrogate);

struct RMeasure {
  double r = 1.0;
  double mean_weight = 1.0;
  std::size_t used = 0;
  std::size_t excluded = 0;
};

/// R and mean weight from positive weights; non-finite weights are excluded.
RMeasure r_measure(std::span<const double> weights);

/// Same from log-weights, shifted by their maximum before exponentiation.
RMeasure r_measure_from_log(std::span<const double> log_weights);

struct DiagnosticsConfig {
  std::size_t walker_count = 0;  // 0: 2n
  std::size_t sweeps = 4000;
  std::size_t burn_in = 1000;
  double stretch_a = kDefaultStretch;
};

struct DiagnosticsRecord {
  std::size_t iteration = 0;
  double e_approx = 0.0;
  double e_true = 0.0;
  double e_star_approx = 0.0;
  double e_star_true = 0.0;
  double r_measure = 1.0;
  double mean_weight = 1.0;
  std::size_t n_samples_each = 0;
  std::size_t excluded_approx = 0;
  std::size_t excluded_true = 0;
  std::size_t excluded_weights = 0;
  std::string warning;
};

/// Two chains (surrogate and true posterior), both initialized from the
/// surrogate's Gaussian prior; deterministic given the seed.
DiagnosticsRecord evaluate_accuracy(const SurrogatePosterior& surrogate,
                                    const TruePosteriorTarget& target,
                                    const DiagnosticsConfig& cfg, std::uint64_t seed,
                                    std::size_t iteration = 0);

/// Generic form over arbitrary densities.
DiagnosticsRecord evaluate_accuracy(const LogDensity& log_surrogate, const LogDensity& log_true,
                                    const GaussianPrior& init, const DiagnosticsConfig& cfg,
                                    std::uint64_t seed, std::size_t iteration = 0);

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path);

}  // namespace gpsur
