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

// Run configuration for the experiment runner. Configs are INI-style text
// with sections; every key has a default except the network file and the free
// parameters. See configs/README.md for the schema.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <boost/property_tree/ptree_fwd.hpp>

#include "gpsur/active_learning.hpp"
#include "gpsur/diagnostics.hpp"

namespace gpsur {

struct SamplerSettings {
  std::size_t walkers = 0;  // 0: 2n
  std::size_t sweeps = 0;
  std::size_t burn_in = 0;
  double stretch_a = kDefaultStretch;
};

enum class InitMode { kGrid, kChain };
enum class DiagnosticsPrior { kSurrogate, kReference };

struct RunConfig {
  std::string name = "run";

  // problem
  std::string network_file;             // absolute after loading
  std::vector<int> experiment_ids;      // empty: every experiment in the file
  std::vector<std::string> free_parameters;
  std::optional<double> sigma;          // default: network file
  std::optional<double> noise_var;      // default: sigma^2
  double reference_prior_variance = 100.0;

  // preliminary chain and Gaussian prior
  SamplerSettings prior_chain{0, 5000, 1000, kDefaultStretch};
  double prior_init_sd = 0.1;  // walkers start at N(truth, sd^2 I)
  double inflation = 2.0;

  // kernel
  double length_scale = 0.5;
  std::optional<double> s2;  // nullopt: auto from the preliminary chain
  double relative_jitter = GpModel::kDefaultRelativeJitter;

  // initial training set
  InitMode init_mode = InitMode::kGrid;
  std::size_t init_grid_per_dim = 4;
  double init_grid_half_width_sds = 2.0;
  std::size_t init_chain_iterations = 10;

  // training loop
  SelectionMode mode = SelectionMode::kActive;
  std::size_t budget = 200;
  std::size_t diag_cadence = 10;
  AcquisitionConfig search;
  DiagnosticsConfig diagnostics;
  DiagnosticsPrior diagnostics_prior = DiagnosticsPrior::kSurrogate;

  // sample subcommand / run outputs
  SamplerSettings sampling{0, 4000, 1000, kDefaultStretch};
  std::size_t grid_points = 200;
  double grid_half_width_sds = 4.0;

  // seeds
  std::optional<std::uint64_t> seed_data;  // default: network file
  std::uint64_t seed_prior = 101;
  std::uint64_t seed_init = 202;
  std::uint64_t seed_training = 303;
  std::uint64_t seed_diagnostics = 404;
  std::uint64_t seed_sample = 505;

  void validate() const;
};

/// Parse config text; relative network paths resolve against base_dir.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Apply "name=value" where name is one of data, prior, init, training,
/// diagnostics, sample.
void apply_seed_override(RunConfig& cfg, const std::string& assignment);

/// Every resolved setting, in the same layout the parser reads.
boost::property_tree::ptree to_ptree(const RunConfig& cfg);

/// Short stable hash of the resolved configuration (hex).
std::string config_hash(const RunConfig& cfg);

}  // namespace gpsur
