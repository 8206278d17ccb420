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

#include "gpsur/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gpsur/csv.hpp"
#include "gpsur/errors.hpp"
#include "gpsur/types.hpp"

namespace gpsur {

namespace {

constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

void collect_paths(const std::vector<std::vector<int>>& adj, int node, int terminal,
                   NodePath& cur, std::vector<NodePath>& out) {
  if (node == terminal) {
    out.push_back(cur);
    return;
  }
  for (int next : adj[static_cast<std::size_t>(node)]) {
    cur.push_back(next);
    collect_paths(adj, next, terminal, cur, out);
    cur.pop_back();
  }
}

}  // namespace

ReactionNetwork::ReactionNetwork(int node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count < 2) throw ConfigError("reaction network needs at least 2 nodes");
  if (edges_.empty()) throw ConfigError("reaction network has no edges");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.from < 1 || e.to > node_count || e.from >= e.to) {
      std::ostringstream msg;
      msg << "invalid edge (" << e.from << "," << e.to
          << "): edges must go from a lower to a higher node within 1.." << node_count;
      throw ConfigError(msg.str());
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (edges_[j] == e) throw ConfigError("duplicate edge in reaction network");
    }
  }
  enumerate_pathways(*this);  // throws when the terminal node is unreachable
}

int ReactionNetwork::edge_index(int from, int to) const {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].from == from && edges_[i].to == to) return static_cast<int>(i);
  }
  return -1;
}

double reaction_rate(double a, double e, double c, double beta) {
  return c * a * std::exp(-beta * e);
}

std::vector<NodePath> enumerate_pathways(const ReactionNetwork& net) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(net.node_count()) + 1);
  for (const Edge& e : net.edges()) adj[static_cast<std::size_t>(e.from)].push_back(e.to);
  for (auto& a : adj) std::sort(a.begin(), a.end());
  std::vector<NodePath> out;
  NodePath cur{1};
  collect_paths(adj, 1, net.terminal(), cur, out);
  if (out.empty()) throw ConfigError("no pathway from node 1 to the terminal node");
  return out;
}

namespace {

double edge_inverse_rate(std::size_t edge, const RateParams& params,
                         const ExperimentCondition& exp) {
  const double r = reaction_rate(params.pre_exponential[edge], params.activation_energy[edge],
                                 exp.concentrations[edge], exp.beta);
  if (!(r > 0.0) || !std::isfinite(r)) return kInfiniteTime;
  return 1.0 / r;
}

void check_sizes(const ReactionNetwork& net, const RateParams& params,
                 const ExperimentCondition& exp) {
  const std::size_t m = net.edge_count();
  if (params.pre_exponential.size() != m || params.activation_energy.size() != m) {
    throw PreconditionError("rate parameters do not match the network's edge count");
  }
  if (exp.concentrations.size() != m) {
    throw PreconditionError("experiment concentrations do not match the network's edge count");
  }
}

}  // namespace

double pathway_time(const ReactionNetwork& net, const NodePath& path, const RateParams& params,
                    const ExperimentCondition& exp) {
  check_sizes(net, params, exp);
  double t = 0.0;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const int idx = net.edge_index(path[k - 1], path[k]);
    if (idx < 0) throw PreconditionError("pathway uses a pair of nodes that is not an edge");
    t += edge_inverse_rate(static_cast<std::size_t>(idx), params, exp);
  }
  return t;
}

ForwardModel::ForwardModel(ReactionNetwork net)
    : net_(std::move(net)), paths_(enumerate_pathways(net_)) {
  for (const NodePath& p : paths_) {
    std::vector<std::size_t> edges;
    for (std::size_t k = 1; k < p.size(); ++k) {
      edges.push_back(static_cast<std::size_t>(net_.edge_index(p[k - 1], p[k])));
    }
    path_edges_.push_back(std::move(edges));
  }
}

double ForwardModel::output(const RateParams& params, const ExperimentCondition& exp) const {
  check_sizes(net_, params, exp);
  double slowest = 0.0;
  for (const auto& edges : path_edges_) {
    double t = 0.0;
    for (std::size_t e : edges) t += edge_inverse_rate(e, params, exp);
    slowest = std::max(slowest, t);
  }
  return slowest;
}

double model_output(const ReactionNetwork& net, const RateParams& params,
                    const ExperimentCondition& exp) {
  return ForwardModel(net).output(params, exp);
}

ObservationSet generate_synthetic_data(const ForwardModel& model, const RateParams& truth,
                                       const std::vector<ExperimentCondition>& experiments,
                                       double sigma, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw ConfigError("noise sigma must be > 0");
  ObservationSet obs;
  obs.noise_sigma = sigma;
  obs.seed = seed;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const auto& exp : experiments) {
    const double clean = model.output(truth, exp);
    obs.clean.push_back(clean);
    obs.observations.push_back(clean + sigma * normal(rng));
  }
  return obs;
}

std::string edge_param_name(char kind, const Edge& e) {
  std::ostringstream s;
  s << kind << '_' << e.from << '_' << e.to;
  return s.str();
}

namespace {

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& tok : split_list(text)) {
    try {
      out.push_back(parse_double(tok));
    } catch (const ConfigError&) {
      throw ConfigError("network file: bad number '" + tok + "' in " + what);
    }
  }
  return out;
}

template <class T>
T require(const boost::property_tree::ptree& pt, const std::string& key) {
  auto v = pt.get_optional<T>(key);
  if (!v) throw ConfigError("network file: missing key '" + key + "'");
  return *v;
}

}  // namespace

NetworkDefinition parse_network_definition(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("network file: ") + e.what());
  }

  const int node_count = require<int>(tree, "network.node_count");
  std::vector<Edge> edges;
  for (const auto& tok : split_list(require<std::string>(tree, "network.edges"))) {
    const auto dash = tok.find('-');
    if (dash == std::string::npos) throw ConfigError("network file: edge '" + tok + "' not i-j");
    try {
      edges.push_back({std::stoi(tok.substr(0, dash)), std::stoi(tok.substr(dash + 1))});
    } catch (const std::exception&) {
      throw ConfigError("network file: edge '" + tok + "' not i-j");
    }
  }
  ReactionNetwork net(node_count, edges);
  const std::size_t m = net.edge_count();

  RateParams truth;
  truth.pre_exponential = parse_numbers(require<std::string>(tree, "truth.A"), "truth.A");
  truth.activation_energy = parse_numbers(require<std::string>(tree, "truth.E"), "truth.E");
  if (truth.pre_exponential.size() != m || truth.activation_energy.size() != m) {
    throw ConfigError("network file: truth A/E must list one value per edge");
  }

  std::vector<ExperimentCondition> exps;
  const auto section = tree.get_child_optional("experiments");
  if (!section || section->empty()) throw ConfigError("network file: no [experiments]");
  for (const auto& [key, node] : *section) {
    ExperimentCondition e;
    try {
      e.id = std::stoi(key);
    } catch (const std::exception&) {
      throw ConfigError("network file: experiment key '" + key + "' is not an integer id");
    }
    auto values = parse_numbers(node.data(), "experiment " + key);
    if (values.size() != m + 1) {
      throw ConfigError("network file: experiment " + key + " needs " + std::to_string(m) +
                        " concentrations and a beta");
    }
    e.beta = values.back();
    values.pop_back();
    e.concentrations = std::move(values);
    for (double c : e.concentrations) {
      if (!(c > 0.0)) throw ConfigError("network file: concentrations must be > 0");
    }
    if (!(e.beta > 0.0)) throw ConfigError("network file: beta must be > 0");
    exps.push_back(std::move(e));
  }

  NetworkDefinition def{
      .name = tree.get<std::string>("network.name", "network"),
      .version = tree.get<int>("network.version", 1),
      .network = std::move(net),
      .truth = std::move(truth),
      .experiments = std::move(exps),
      .noise_sigma = require<double>(tree, "noise.sigma"),
      .seed = require<std::uint64_t>(tree, "noise.seed"),
  };
  if (!(def.noise_sigma > 0.0)) throw ConfigError("network file: noise.sigma must be > 0");
  return def;
}

NetworkDefinition load_network_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read network file: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_network_definition(buf.str());
}

}  // namespace gpsur
