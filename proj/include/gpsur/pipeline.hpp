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

// End-to-end experiment runner. Each stage reads the artifacts of the stages
// before it from the run directory and writes its own, so `run` and the
// individual subcommands produce identical files.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gpsur/active_learning.hpp"
#include "gpsur/bayes.hpp"
#include "gpsur/diagnostics.hpp"
#include "gpsur/network.hpp"
#include "gpsur/run_config.hpp"

namespace gpsur {

namespace artifact {
inline constexpr const char* kManifest = "manifest.ini";
inline constexpr const char* kObservations = "observations.csv";
inline constexpr const char* kPrior = "prior.ini";
inline constexpr const char* kPriorChain = "prior_chain.csv";
inline constexpr const char* kInitialTraining = "initial_training.csv";
inline constexpr const char* kHistory = "training_history.csv";
inline constexpr const char* kDiagnostics = "diagnostics.csv";
inline constexpr const char* kGpModel = "gp_model.csv";
inline constexpr const char* kDiagnoseRerun = "diagnose.csv";
inline constexpr const char* kSurrogateSamples = "surrogate_samples.csv";
inline constexpr const char* kTrueSamples = "true_samples.csv";
inline constexpr const char* kGrid = "grid.csv";
}  // namespace artifact

/// Exit status for an exception: 1 config/input, 2 numerical, 3 I/O.
int exit_code_for(const std::exception& e);

/// s^2 = max |log-likelihood| over the logged proposals. Throws on an empty log.
double resolve_s2(std::span<const double> proposal_log_likelihoods);

/// The inverse problem a config describes.
struct Problem {
  NetworkDefinition definition;
  std::shared_ptr<const ForwardModel> model;
  ParameterMap params;
  std::vector<ExperimentCondition> experiments;
  double sigma;
  double noise_var;
  std::uint64_t data_seed;

  std::size_t dim() const { return params.dim(); }
};

Problem load_problem(const RunConfig& cfg);

/// Broad zero-mean prior of the true posterior.
GaussianPrior reference_prior(const RunConfig& cfg, const Problem& problem);

/// True posterior under the reference prior for the given observations.
TruePosteriorTarget reference_target(const RunConfig& cfg, const Problem& problem,
                                     std::vector<double> observations);

/// Saved output of build-prior.
struct PriorArtifact {
  GaussianPrior prior;
  double s2;
  bool s2_auto;
  std::size_t chain_walkers;
};

class Pipeline {
 public:
  Pipeline(RunConfig cfg, std::filesystem::path dir);

  const RunConfig& config() const noexcept { return cfg_; }
  const std::filesystem::path& dir() const noexcept { return dir_; }
  const Problem& problem() const { return problem_; }

  /// Synthetic observations; writes observations.csv.
  ObservationSet gen_data();
  /// Preliminary chain and Gaussian prior; writes prior.ini and prior_chain.csv.
  PriorArtifact build_prior();
  /// Initial training set plus the training loop; writes initial_training.csv,
  /// training_history.csv, diagnostics.csv and gp_model.csv.
  TrainResult train();
  /// Recompute the final diagnostics record of a saved surrogate; writes diagnose.csv.
  DiagnosticsRecord diagnose();
  /// Chain on the surrogate ("surrogate") or the reference true posterior ("true").
  ChainSamples sample(const std::string& surface);
  /// 2-D only: grid.csv with the log densities over the plotting grid.
  void write_grid();
  /// Every stage in order.
  void run();

  /// Non-empty when the last train() stopped before its budget.
  const std::string& halt_reason() const noexcept { return halt_reason_; }
  /// Progress lines go here when set.
  void set_log(std::ostream* log) { log_ = log; }

  std::vector<double> load_observations() const;
  PriorArtifact load_prior() const;
  SurrogatePosterior load_surrogate() const;
  TruePosteriorTarget diagnostics_target(const SurrogatePosterior& surrogate) const;

 private:
  std::filesystem::path path(const char* name) const { return dir_ / name; }
  void require(const char* name, const char* producer) const;

  RunConfig cfg_;
  std::filesystem::path dir_;
  Problem problem_;
  std::string halt_reason_;
  std::ostream* log_ = nullptr;
};

/// Write manifest.ini in dir: resolved config, derived values known from the
/// artifacts present so far, and the status of `command`. Usable when the
/// problem itself failed to load.
void write_manifest(const RunConfig& cfg, const std::filesystem::path& dir,
                    const std::string& command, const std::string& status,
                    const std::string& error = {}, int exit_code = 0);

/// Default artifact directory: runs/<name>-<hash>-<UTC timestamp>.
std::filesystem::path default_run_dir(const RunConfig& cfg);

}  // namespace gpsur
