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

// Sequential irreversible reaction networks with Arrhenius-like edge rates.
//
// The observable of one experiment is the completion time of the slowest
// pathway from node 1 to the terminal node, where a pathway's time is the sum
// of the inverse rates along its edges.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gpsur {

struct Edge {
  int from;
  int to;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class ReactionNetwork {
 public:
  /// Validates: node_count >= 2, edges go from lower to higher node numbers in
  /// 1..node_count, no duplicate edges, and node 1 reaches node_count.
  ReactionNetwork(int node_count, std::vector<Edge> edges);

  int node_count() const noexcept { return node_count_; }
  int terminal() const noexcept { return node_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Index of edge (from, to) or -1.
  int edge_index(int from, int to) const;

 private:
  int node_count_;
  std::vector<Edge> edges_;
};

/// Per-edge pre-exponential factors A and activation energies E (edge order).
struct RateParams {
  std::vector<double> pre_exponential;
  std::vector<double> activation_energy;
};

struct ExperimentCondition {
  int id = 0;
  std::vector<double> concentrations;  // one per edge, edge order
  double beta = 0.0;                   // inverse temperature
};

struct ObservationSet {
  std::vector<double> clean;         // noiseless model outputs
  std::vector<double> observations;  // clean + sigma * xi
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

using NodePath = std::vector<int>;

/// C * A * exp(-beta * E).
double reaction_rate(double a, double e, double c, double beta);

/// Every simple directed path from node 1 to the terminal node in
/// lexicographic order. Throws ConfigError if there is none.
std::vector<NodePath> enumerate_pathways(const ReactionNetwork& net);

/// Sum of inverse edge rates along the path; +inf if any rate is not positive.
double pathway_time(const ReactionNetwork& net, const NodePath& path, const RateParams& params,
                    const ExperimentCondition& exp);

/// Network with its pathways pre-resolved to edge indices.
class ForwardModel {
 public:
  explicit ForwardModel(ReactionNetwork net);

  const ReactionNetwork& network() const noexcept { return net_; }
  const std::vector<NodePath>& pathways() const noexcept { return paths_; }

  /// Slowest pathway time; +inf sentinel when any pathway has a non-positive rate.
  double output(const RateParams& params, const ExperimentCondition& exp) const;

 private:
  ReactionNetwork net_;
  std::vector<NodePath> paths_;
  std::vector<std::vector<std::size_t>> path_edges_;
};

double model_output(const ReactionNetwork& net, const RateParams& params,
                    const ExperimentCondition& exp);

ObservationSet generate_synthetic_data(const ForwardModel& model, const RateParams& truth,
                                       const std::vector<ExperimentCondition>& experiments,
                                       double sigma, std::uint64_t seed);

/// Contents of a network definition file.
struct NetworkDefinition {
  std::string name;
  int version = 1;
  ReactionNetwork network;
  RateParams truth;
  std::vector<ExperimentCondition> experiments;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Parse a network definition file (INI-style sections). Throws ConfigError/IoError.
NetworkDefinition load_network_file(const std::string& path);
NetworkDefinition parse_network_definition(const std::string& text);

/// Short label for an edge parameter: "A_1_2" / "E_1_2".
std::string edge_param_name(char kind, const Edge& e);

}  // namespace gpsur
