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

#include "gpsur/ensemble_sampler.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gpsur/csv.hpp"
#include "gpsur/errors.hpp"

namespace gpsur {

namespace {

void check_walker_count(std::size_t count, std::size_t dim) {
  if (count < 2 * dim || count < 2) {
    std::ostringstream msg;
    msg << "ensemble needs at least 2n = " << 2 * dim << " walkers, got " << count;
    throw ConfigError(msg.str());
  }
}

}  // namespace

EnsembleState init_walkers(std::size_t count, const ParamVector& center,
                           const Eigen::MatrixXd& spread, std::uint64_t seed) {
  check_walker_count(count, static_cast<std::size_t>(center.size()));
  EnsembleState state;
  state.rng.seed(seed);
  state.walkers = sample_gaussian(count, center, spread, state.rng);
  return state;
}

EnsembleState make_ensemble(PointMatrix walkers, std::uint64_t seed) {
  check_walker_count(static_cast<std::size_t>(walkers.rows()),
                     static_cast<std::size_t>(walkers.cols()));
  EnsembleState state;
  state.rng.seed(seed);
  state.walkers = std::move(walkers);
  return state;
}

void evaluate_walkers(EnsembleState& state, const LogDensity& log_target) {
  state.log_target.resize(state.walkers.rows());
  for (Eigen::Index i = 0; i < state.walkers.rows(); ++i) {
    const double lp = log_target(state.walkers.row(i).transpose());
    state.log_target[i] = std::isnan(lp) ? -std::numeric_limits<double>::infinity() : lp;
  }
}

double stretch_scale(double a, double u) {
  const double root = std::sqrt(a);
  const double t = u * (root - 1.0 / root) + 1.0 / root;
  return t * t;
}

double sample_z(double a, Rng& rng) {
  if (!(a > 1.0)) throw ConfigError("stretch parameter a must be > 1");
  return stretch_scale(a, uniform01(rng));
}

namespace {

// One sweep; when `flags` is non-null the per-walker acceptance is recorded there.
void sweep(EnsembleState& state, const LogDensity& log_target, double a, std::uint8_t* flags) {
  const auto w = static_cast<Eigen::Index>(state.walker_count());
  const auto n = static_cast<Eigen::Index>(state.dim());
  const double dim_less_one = static_cast<double>(n - 1);
  ParamVector proposal(n);
  for (Eigen::Index i = 0; i < w; ++i) {
    auto j = static_cast<Eigen::Index>(uniform_index(state.rng, static_cast<std::size_t>(w - 1)));
    if (j >= i) ++j;
    const double z = sample_z(a, state.rng);
    const double u = uniform01(state.rng);
    // X_j + z (X_i - X_j), written so that z == 1 reproduces X_i exactly
    for (Eigen::Index d = 0; d < n; ++d) {
      const double xi = state.walkers(i, d);
      proposal[d] = xi + (z - 1.0) * (xi - state.walkers(j, d));
    }
    ++state.proposals;
    const double lp = log_target(proposal);
    bool accept = false;
    if (std::isnan(lp)) {
      ++state.nan_rejections;
    } else if (lp > -std::numeric_limits<double>::infinity()) {
      const double log_ratio = dim_less_one * std::log(z) + lp - state.log_target[i];
      accept = log_ratio >= 0.0 || std::log(u) < log_ratio;
    }
    if (accept) {
      state.walkers.row(i) = proposal.transpose();
      state.log_target[i] = lp;
      ++state.accepted;
    }
    if (flags != nullptr) flags[i] = accept ? 1 : 0;
  }
  ++state.step_index;
}

}  // namespace

void stretch_move(EnsembleState& state, const LogDensity& log_target, double a) {
  if (!(a > 1.0)) throw ConfigError("stretch parameter a must be > 1");
  check_walker_count(state.walker_count(), state.dim());
  if (!state.evaluated()) evaluate_walkers(state, log_target);
  sweep(state, log_target, a, nullptr);
}

ChainSamples run_chain(EnsembleState& state, const LogDensity& log_target, std::size_t n_sweeps,
                       std::size_t burn_in, double a) {
  if (burn_in >= n_sweeps) throw ConfigError("burn-in must be smaller than the number of sweeps");
  if (!(a > 1.0)) throw ConfigError("stretch parameter a must be > 1");
  check_walker_count(state.walker_count(), state.dim());
  if (!state.evaluated()) evaluate_walkers(state, log_target);

  const std::size_t w = state.walker_count();
  const std::size_t kept = n_sweeps - burn_in;
  ChainSamples out;
  out.walker_count = w;
  out.burn_in_used = burn_in;
  out.sweeps = n_sweeps;
  out.samples.resize(static_cast<Eigen::Index>(kept * w), state.walkers.cols());
  out.log_target.resize(static_cast<Eigen::Index>(kept * w));
  out.accepted.assign(kept * w, 0);

  const std::uint64_t proposals0 = state.proposals;
  const std::uint64_t accepted0 = state.accepted;
  const std::uint64_t nan0 = state.nan_rejections;
  std::vector<std::uint8_t> flags(w);
  for (std::size_t s = 0; s < n_sweeps; ++s) {
    sweep(state, log_target, a, flags.data());
    if (s < burn_in) continue;
    const auto base = static_cast<Eigen::Index>((s - burn_in) * w);
    out.samples.middleRows(base, static_cast<Eigen::Index>(w)) = state.walkers;
    out.log_target.segment(base, static_cast<Eigen::Index>(w)) = state.log_target;
    std::copy(flags.begin(), flags.end(), out.accepted.begin() + base);
  }
  const auto proposals = static_cast<double>(state.proposals - proposals0);
  out.acceptance_fraction =
      proposals > 0 ? static_cast<double>(state.accepted - accepted0) / proposals : 0.0;
  out.nan_rejections = state.nan_rejections - nan0;
  if (out.acceptance_fraction < 0.01) {
    std::ostringstream msg;
    msg << "degenerate chain: acceptance fraction " << out.acceptance_fraction << " below 1%";
    out.warning = msg.str();
  }
  return out;
}

void write_chain_csv(const std::string& path, const ChainSamples& chain) {
  std::vector<std::string> header;
  const auto n = chain.samples.cols();
  for (Eigen::Index d = 0; d < n; ++d) header.push_back("theta_" + std::to_string(d));
  header.emplace_back("log_target");
  header.emplace_back("accepted");
  CsvWriter csv("gpsurrogate chain_samples", header);
  for (Eigen::Index r = 0; r < chain.samples.rows(); ++r) {
    std::vector<std::string> cells;
    cells.reserve(header.size());
    for (Eigen::Index d = 0; d < n; ++d) cells.push_back(format_double(chain.samples(r, d)));
    cells.push_back(format_double(chain.log_target[r]));
    cells.push_back(chain.accepted[static_cast<std::size_t>(r)] ? "1" : "0");
    csv.add_row(std::move(cells));
  }
  csv.save(path);
}

ChainSamples read_chain_csv(const std::string& path, std::size_t walker_count) {
  const CsvTable t = read_csv(path);
  if (t.header.size() < 3) throw IoError("chain CSV has too few columns: " + path);
  const std::size_t n = t.header.size() - 2;
  ChainSamples c;
  c.walker_count = walker_count;
  c.samples.resize(static_cast<Eigen::Index>(t.size()), static_cast<Eigen::Index>(n));
  c.log_target.resize(static_cast<Eigen::Index>(t.size()));
  c.accepted.resize(t.size());
  const std::size_t lt = t.column("log_target");
  const std::size_t acc = t.column("accepted");
  for (std::size_t r = 0; r < t.size(); ++r) {
    for (std::size_t d = 0; d < n; ++d) {
      c.samples(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d)) = t.number(r, d);
    }
    c.log_target[static_cast<Eigen::Index>(r)] = t.number(r, lt);
    c.accepted[r] = t.rows[r][acc] == "1" ? 1 : 0;
  }
  if (walker_count > 0) c.sweeps = t.size() / walker_count;
  return c;
}

}  // namespace gpsur
