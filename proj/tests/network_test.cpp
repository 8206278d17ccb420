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


#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "gpsur/errors.hpp"
#include "gpsur/network.hpp"

using namespace gpsur;

namespace {

const std::string kData = std::string(GPSUR_SOURCE_DIR) + "/data/";

// Brute force: every increasing node sequence 1 < ... < N is a candidate path
// (edges only go upward); keep those whose consecutive pairs are all edges.
double brute_force_output(int nodes, const std::vector<Edge>& edges, const RateParams& p,
                          const ExperimentCondition& x) {
  auto edge_of = [&](int a, int b) {
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (edges[k].from == a && edges[k].to == b) return static_cast<int>(k);
    }
    return -1;
  };
  double worst = 0.0;
  const int inner = nodes - 2;
  for (unsigned mask = 0; mask < (1u << inner); ++mask) {
    std::vector<int> seq{1};
    for (int b = 0; b < inner; ++b) {
      if (mask & (1u << b)) seq.push_back(b + 2);
    }
    seq.push_back(nodes);
    double t = 0.0;
    bool ok = true;
    for (std::size_t k = 1; k < seq.size() && ok; ++k) {
      const int e = edge_of(seq[k - 1], seq[k]);
      if (e < 0) {
        ok = false;
        break;
      }
      const double r = x.concentrations[static_cast<std::size_t>(e)] *
                       p.pre_exponential[static_cast<std::size_t>(e)] *
                       std::exp(-x.beta * p.activation_energy[static_cast<std::size_t>(e)]);
      t += r > 0.0 ? 1.0 / r : std::numeric_limits<double>::infinity();
    }
    if (ok) worst = std::max(worst, t);
  }
  return worst;
}

ExperimentCondition unit_experiment(std::size_t edges) {
  return ExperimentCondition{1, std::vector<double>(edges, 1.0), 1.0};
}

}  // namespace

TEST(ReactionRate, HandValues) {
  EXPECT_EQ(reaction_rate(1.0, 0.0, 1.0, 3.0), 1.0);
  EXPECT_NEAR(reaction_rate(1.0, 5.0, 10.0, 0.01), 9.512294, 1e-6);
  EXPECT_LT(reaction_rate(1.0, 5.0, 1.0, 1e4), 1e-300);
}

TEST(Pathways, KnownNetworks) {
  const ReactionNetwork three(3, {{1, 2}, {1, 3}, {2, 3}});
  EXPECT_EQ(enumerate_pathways(three), (std::vector<NodePath>{{1, 2, 3}, {1, 3}}));
  const ReactionNetwork two(2, {{1, 2}});
  EXPECT_EQ(enumerate_pathways(two), (std::vector<NodePath>{{1, 2}}));
  const ReactionNetwork six(6, {{1, 2}, {1, 4}, {2, 3}, {2, 5}, {3, 4}, {4, 6}, {5, 6}});
  EXPECT_EQ(enumerate_pathways(six),
            (std::vector<NodePath>{{1, 2, 3, 4, 6}, {1, 2, 5, 6}, {1, 4, 6}}));
}

TEST(Pathways, InvalidNetworks) {
  EXPECT_THROW(ReactionNetwork(3, {{1, 2}}), ConfigError);          // 3 unreachable
  EXPECT_THROW(ReactionNetwork(3, {{2, 1}, {1, 3}}), ConfigError);  // downward edge
  EXPECT_THROW(ReactionNetwork(3, {{1, 3}, {1, 3}}), ConfigError);  // duplicate
  EXPECT_THROW(ReactionNetwork(1, {}), ConfigError);
}

TEST(PathwayTime, HandValues) {
  const NetworkDefinition def = load_network_file(kData + "network3.cfg");
  const ExperimentCondition& e1 = def.experiments.at(0);
  EXPECT_NEAR(pathway_time(def.network, {1, 2, 3}, def.truth, e1), 0.155630, 1e-6);
  EXPECT_NEAR(pathway_time(def.network, {1, 3}, def.truth, e1), 0.680134, 1e-6);
  EXPECT_NEAR(model_output(def.network, def.truth, e1), 0.680134, 1e-6);

  const RateParams unit{{1, 1, 1}, {0, 0, 0}};
  EXPECT_EQ(pathway_time(def.network, {1, 2, 3}, unit, unit_experiment(3)), 2.0);
  EXPECT_EQ(model_output(def.network, unit, unit_experiment(3)), 2.0);
}

TEST(ModelOutput, NonPositiveRateIsInfinite) {
  const ReactionNetwork three(3, {{1, 2}, {1, 3}, {2, 3}});
  const RateParams p{{1.0, 0.0, 1.0}, {0, 0, 0}};
  EXPECT_EQ(model_output(three, p, unit_experiment(3)), std::numeric_limits<double>::infinity());
  const RateParams neg{{-1.0, 1.0, 1.0}, {0, 0, 0}};
  EXPECT_EQ(model_output(three, neg, unit_experiment(3)), std::numeric_limits<double>::infinity());
}

TEST(ModelOutput, MatchesBruteForceOnRandomDags) {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> ua(0.2, 5.0), ue(0.0, 6.0), uc(0.3, 30.0), ub(0.01, 0.5);
  int built = 0;
  while (built < 100) {
    const int nodes = 2 + static_cast<int>(rng() % 7);  // 2..8
    std::vector<Edge> edges;
    for (int a = 1; a <= nodes; ++a) {
      for (int b = a + 1; b <= nodes; ++b) {
        if (rng() % 2) edges.push_back({a, b});
      }
    }
    if (edges.empty()) continue;
    try {
      const ReactionNetwork net(nodes, edges);
      RateParams p;
      ExperimentCondition x{1, {}, ub(rng)};
      for (std::size_t k = 0; k < edges.size(); ++k) {
        p.pre_exponential.push_back(ua(rng));
        p.activation_energy.push_back(ue(rng));
        x.concentrations.push_back(uc(rng));
      }
      EXPECT_EQ(model_output(net, p, x), brute_force_output(nodes, edges, p, x));
      ++built;
    } catch (const ConfigError&) {
      // terminal unreachable: draw again
    }
  }
}

TEST(ModelOutput, MonotoneInParameters) {
  const NetworkDefinition def = load_network_file(kData + "network6.cfg");
  const ForwardModel model(def.network);
  std::mt19937_64 rng(5);
  for (const auto& x : def.experiments) {
    const double base = model.output(def.truth, x);
    EXPECT_GT(base, 0.0);
    for (std::size_t e = 0; e < def.network.edge_count(); ++e) {
      RateParams up_a = def.truth;
      up_a.pre_exponential[e] *= 1.1;
      EXPECT_LE(model.output(up_a, x), base);
      RateParams up_e = def.truth;
      up_e.activation_energy[e] += 0.5;
      EXPECT_GE(model.output(up_e, x), base);
    }
  }
}

TEST(NetworkFiles, PackagedDefinitions) {
  const NetworkDefinition n3 = load_network_file(kData + "network3.cfg");
  EXPECT_EQ(n3.network.node_count(), 3);
  EXPECT_EQ(n3.network.edges(), (std::vector<Edge>{{1, 2}, {1, 3}, {2, 3}}));
  EXPECT_EQ(n3.truth.pre_exponential, (std::vector<double>{1, 3, 2}));
  EXPECT_EQ(n3.truth.activation_energy, (std::vector<double>{5, 2, 1}));
  EXPECT_EQ(n3.experiments.size(), 7u);
  EXPECT_EQ(n3.noise_sigma, 0.1);

  const NetworkDefinition n6 = load_network_file(kData + "network6.cfg");
  EXPECT_EQ(n6.network.node_count(), 6);
  EXPECT_EQ(n6.network.edge_count(), 7u);
  EXPECT_EQ(n6.truth.pre_exponential, (std::vector<double>{7, 2, 3, 6, 5, 4, 1}));
  EXPECT_EQ(n6.truth.activation_energy, (std::vector<double>{5, 2, 2, 4, 4, 3, 2}));
  ASSERT_EQ(n6.experiments.size(), 20u);
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_EQ(n6.experiments[k].beta, 0.01);
    EXPECT_EQ(n6.experiments[k + 10].beta, 0.1);
    EXPECT_EQ(n6.experiments[k + 10].concentrations, n6.experiments[k].concentrations);
    EXPECT_EQ(n6.experiments[k + 10].id, static_cast<int>(k + 11));
  }
  EXPECT_EQ(n6.noise_sigma, 0.6);
  EXPECT_EQ(edge_param_name('A', {2, 5}), "A_2_5");
}

TEST(NetworkFiles, Errors) {
  EXPECT_THROW(load_network_file(kData + "does-not-exist.cfg"), IoError);
  EXPECT_THROW(parse_network_definition("[network]\nnode_count = 3\n"), ConfigError);
  EXPECT_THROW(parse_network_definition("[network]\nname=x\nnode_count=2\nedges=1-2\n"
                                        "[truth]\nA=1,2\nE=1\n[experiments]\n1=1,0.1\n"
                                        "[noise]\nsigma=0.1\nseed=1\n"),
               ConfigError);
}

TEST(SyntheticData, ReproducibleAndNoiseScaled) {
  const NetworkDefinition def = load_network_file(kData + "network3.cfg");
  const ForwardModel model(def.network);
  const ObservationSet a = generate_synthetic_data(model, def.truth, def.experiments, 0.1, 7);
  const ObservationSet b = generate_synthetic_data(model, def.truth, def.experiments, 0.1, 7);
  EXPECT_EQ(a.observations, b.observations);

  const ObservationSet tiny = generate_synthetic_data(model, def.truth, def.experiments, 1e-12, 7);
  for (std::size_t k = 0; k < tiny.clean.size(); ++k) {
    EXPECT_NEAR(tiny.observations[k], tiny.clean[k], 1e-10);
  }

  for (double sigma : {0.1, 0.6}) {
    double sum2 = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      const ObservationSet o = generate_synthetic_data(model, def.truth, def.experiments, sigma, seed);
      for (std::size_t k = 0; k < o.clean.size(); ++k) {
        const double r = o.observations[k] - o.clean[k];
        sum2 += r * r;
        ++count;
      }
    }
    EXPECT_NEAR(std::sqrt(sum2 / static_cast<double>(count)), sigma, 0.03 * sigma);
  }
  EXPECT_THROW(generate_synthetic_data(model, def.truth, def.experiments, 0.0, 1), ConfigError);
}
