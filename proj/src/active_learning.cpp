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

#include "gpsur/active_learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gpsur/csv.hpp"
#include "gpsur/errors.hpp"

namespace gpsur {

void AcquisitionConfig::validate() const {
  if (!(distance_factor > 0.0)) throw ConfigError("distance_factor must be > 0");
  if (search_burn_in >= search_sweeps) throw ConfigError("search burn-in must be < search sweeps");
  if (!(stretch_a > 1.0)) throw ConfigError("stretch parameter a must be > 1");
  if (!(tie_tolerance >= 0.0)) throw ConfigError("tie_tolerance must be >= 0");
}

double log_variance_factor(double variance) {
  if (!(variance > 0.0)) return -std::numeric_limits<double>::infinity();
  if (variance > 30.0) return 2.0 * variance + std::log1p(-std::exp(-variance));
  return variance + std::log(std::expm1(variance));
}

double log_utility(const SurrogatePosterior& surrogate, const ParamVector& theta) {
  const Prediction p = surrogate.gp.predict(theta);
  if (!(p.variance > 0.0)) return -std::numeric_limits<double>::infinity();
  const double phi = p.mean + surrogate.prior.log_density(theta) + surrogate.log_offset;
  return 2.0 * phi + log_variance_factor(p.variance);
}

bool distance_ok(const ParamVector& theta, const PointMatrix& existing, double ell, double factor) {
  const double limit = factor * ell;
  for (Eigen::Index i = 0; i < existing.rows(); ++i) {
    if (!((existing.row(i).transpose() - theta).norm() > limit)) return false;
  }
  return true;
}

bool distance_ok(const ParamVector& theta, const GpModel& gp, double factor) {
  return gp.min_distance(theta) > factor * gp.kernel().length_scale();
}

namespace {

std::size_t walkers_for(const AcquisitionConfig& cfg, std::size_t dim) {
  return cfg.walker_count ? cfg.walker_count : 2 * dim;
}

ChainSamples search_chain(const SurrogatePosterior& surrogate, const AcquisitionConfig& cfg,
                          const LogDensity& density, std::uint64_t seed) {
  EnsembleState state = init_walkers(walkers_for(cfg, surrogate.prior.dim()),
                                     surrogate.prior.mean(), surrogate.prior.covariance(),
                                     derive_seed(seed, 1));
  return run_chain(state, density, cfg.search_sweeps, cfg.search_burn_in, cfg.stretch_a);
}

std::string saturation_message(std::size_t samples, const AcquisitionConfig& cfg,
                               const GpModel& gp) {
  std::ostringstream msg;
  msg << "saturation: none of the " << samples << " search samples is farther than "
      << cfg.distance_factor << " * ell = " << cfg.distance_factor * gp.kernel().length_scale()
      << " from all " << gp.size() << " training inputs";
  return msg.str();
}

}  // namespace

Selection select_next_point(const SurrogatePosterior& surrogate, const AcquisitionConfig& cfg,
                            std::uint64_t seed) {
  cfg.validate();
  LogDensity utility = [&surrogate](const ParamVector& x) { return log_utility(surrogate, x); };
  const ChainSamples chain = search_chain(surrogate, cfg, utility, seed);

  std::vector<std::size_t> ok;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const double v = chain.log_target[static_cast<Eigen::Index>(i)];
    if (!std::isfinite(v)) continue;
    if (!distance_ok(chain.samples.row(static_cast<Eigen::Index>(i)).transpose(), surrogate.gp,
                     cfg.distance_factor)) {
      continue;
    }
    ok.push_back(i);
    best = std::max(best, v);
  }
  if (ok.empty()) throw SaturationError(saturation_message(chain.size(), cfg, surrogate.gp));

  std::vector<std::size_t> ties;
  for (std::size_t i : ok) {
    if (chain.log_target[static_cast<Eigen::Index>(i)] >= best - cfg.tie_tolerance) ties.push_back(i);
  }
  Rng rng(derive_seed(seed, 2));
  const std::size_t pick = ties.size() == 1 ? ties[0] : ties[uniform_index(rng, ties.size())];
  return Selection{chain.samples.row(static_cast<Eigen::Index>(pick)).transpose(),
                   chain.log_target[static_cast<Eigen::Index>(pick)], ok.size()};
}

Selection select_random_point(const SurrogatePosterior& surrogate, const AcquisitionConfig& cfg,
                              std::uint64_t seed) {
  cfg.validate();
  LogDensity density = [&surrogate](const ParamVector& x) {
    return log_surrogate_posterior(surrogate, x);
  };
  const ChainSamples chain = search_chain(surrogate, cfg, density, seed);
  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (distance_ok(chain.samples.row(static_cast<Eigen::Index>(i)).transpose(), surrogate.gp,
                    cfg.distance_factor)) {
      ok.push_back(i);
    }
  }
  if (ok.empty()) throw SaturationError(saturation_message(chain.size(), cfg, surrogate.gp));
  Rng rng(derive_seed(seed, 2));
  const std::size_t pick = ok[uniform_index(rng, ok.size())];
  ParamVector theta = chain.samples.row(static_cast<Eigen::Index>(pick)).transpose();
  const double value = log_utility(surrogate, theta);
  return Selection{std::move(theta), value, ok.size()};
}

PointMatrix init_training_grid(const GaussianPrior& prior, std::size_t per_dim,
                               double half_width_sds) {
  if (per_dim == 0) throw ConfigError("grid needs at least one point per dimension");
  const std::size_t n = prior.dim();
  std::size_t total = 1;
  for (std::size_t d = 0; d < n; ++d) total *= per_dim;
  std::vector<double> offsets(per_dim, 0.0);
  if (per_dim > 1) {
    for (std::size_t k = 0; k < per_dim; ++k) {
      offsets[k] = -half_width_sds +
                   2.0 * half_width_sds * static_cast<double>(k) / static_cast<double>(per_dim - 1);
    }
  }
  PointMatrix grid(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(n));
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t row = 0; row < total; ++row) {
    for (std::size_t d = 0; d < n; ++d) {
      const auto di = static_cast<Eigen::Index>(d);
      const double sd = std::sqrt(prior.covariance()(di, di));
      grid(static_cast<Eigen::Index>(row), di) = prior.mean()[di] + offsets[digit[d]] * sd;
    }
    // odometer, last coordinate fastest
    for (std::size_t d = n; d-- > 0;) {
      if (++digit[d] < per_dim) break;
      digit[d] = 0;
    }
  }
  return grid;
}

PointMatrix init_training_from_chain(const ChainSamples& chain, std::size_t walker_count,
                                     std::size_t iteration_count, std::uint64_t seed) {
  if (walker_count == 0) throw ConfigError("walker_count must be >= 1");
  const std::size_t sweeps = chain.size() / walker_count;
  if (iteration_count == 0 || sweeps < iteration_count) {
    std::ostringstream msg;
    msg << "chain has " << sweeps << " post-burn-in sweeps; " << iteration_count << " requested";
    throw ConfigError(msg.str());
  }
  std::vector<std::size_t> idx(sweeps);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t k = 0; k < iteration_count; ++k) {
    const std::size_t j = k + uniform_index(rng, sweeps - k);
    std::swap(idx[k], idx[j]);
  }
  idx.resize(iteration_count);
  std::sort(idx.begin(), idx.end());

  std::vector<ParamVector> points;
  for (std::size_t s : idx) {
    for (std::size_t w = 0; w < walker_count; ++w) {
      ParamVector p = chain.samples.row(static_cast<Eigen::Index>(s * walker_count + w)).transpose();
      const bool dup = std::any_of(points.begin(), points.end(),
                                   [&p](const ParamVector& q) { return q == p; });
      if (!dup) points.push_back(std::move(p));
    }
  }
  PointMatrix out(static_cast<Eigen::Index>(points.size()), chain.samples.cols());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  }
  return out;
}

std::uint64_t diagnostics_seed_for(std::uint64_t base, std::size_t iteration) {
  return derive_seed(base, 1000003 + iteration);
}

TrainResult train_loop(const TruePosteriorTarget& target, SurrogatePosterior surrogate,
                       const TrainOptions& options, std::uint64_t seed) {
  if (options.budget == 0) throw ConfigError("training budget must be >= 1");
  options.acquisition.validate();
  TrainResult res{std::move(surrogate), {}};
  TrainingHistory& hist = res.history;
  const TruePosteriorTarget& diag_target =
      options.diagnostics_target ? *options.diagnostics_target : target;

  std::size_t last_diag = static_cast<std::size_t>(-1);
  auto run_diagnostics = [&](std::size_t iteration) {
    if (options.diag_cadence == 0 || last_diag == iteration) return;
    DiagnosticsRecord rec =
        evaluate_accuracy(res.surrogate, diag_target, options.diagnostics,
                          diagnostics_seed_for(options.diagnostics_seed, iteration), iteration);
    if (options.on_diagnostics) options.on_diagnostics(rec);
    hist.diagnostics.push_back(std::move(rec));
    last_diag = iteration;
  };

  run_diagnostics(0);
  std::size_t done = 0;
  for (std::size_t it = 1; it <= options.budget; ++it) {
    const std::uint64_t it_seed = derive_seed(seed, it);
    Selection sel;
    try {
      sel = options.mode == SelectionMode::kActive
                ? select_next_point(res.surrogate, options.acquisition, it_seed)
                : select_random_point(res.surrogate, options.acquisition, it_seed);
    } catch (const SaturationError& e) {
      hist.halt_reason = e.what();
      break;
    }
    const double ll = log_likelihood(target, sel.theta);
    ++hist.forward_evaluations;
    if (!std::isfinite(ll)) {
      hist.halt_reason = "non-finite log-likelihood at the selected point";
      break;
    }
    res.surrogate.gp.add_point(sel.theta, ll);
    IterationRecord rec{it, std::move(sel.theta), ll, sel.acquisition_value, sel.candidates};
    if (options.on_iteration) options.on_iteration(rec);
    hist.iterations.push_back(std::move(rec));
    done = it;
    if (options.diag_cadence && it % options.diag_cadence == 0) run_diagnostics(it);
  }
  run_diagnostics(done);
  return res;
}

void write_history_csv(const std::string& path, const TrainingHistory& history, std::size_t dim) {
  std::vector<std::string> header{"iteration"};
  for (std::size_t d = 0; d < dim; ++d) header.push_back("theta_" + std::to_string(d));
  header.insert(header.end(), {"log_likelihood", "acquisition_value", "halt_reason"});
  CsvWriter csv("gpsurrogate training_history", header);
  std::string reason = history.halt_reason;
  std::replace(reason.begin(), reason.end(), ',', ';');
  for (std::size_t k = 0; k < history.iterations.size(); ++k) {
    const auto& r = history.iterations[k];
    std::vector<std::string> cells{std::to_string(r.iteration)};
    for (Eigen::Index d = 0; d < r.theta.size(); ++d) cells.push_back(format_double(r.theta[d]));
    cells.push_back(format_double(r.log_likelihood));
    cells.push_back(format_double(r.acquisition_value));
    cells.push_back(k + 1 == history.iterations.size() ? reason : "");
    csv.add_row(std::move(cells));
  }
  if (history.iterations.empty() && !reason.empty()) {
    std::vector<std::string> cells{"0"};
    for (std::size_t d = 0; d < dim + 2; ++d) cells.emplace_back("nan");
    cells.push_back(reason);
    csv.add_row(std::move(cells));
  }
  csv.save(path);
}

}  // namespace gpsur
