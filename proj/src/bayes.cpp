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

#include "gpsur/bayes.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gpsur/errors.hpp"

namespace gpsur {

ParameterMap::ParameterMap(const ReactionNetwork& net, RateParams base,
                           const std::vector<std::string>& names)
    : base_(std::move(base)) {
  if (names.empty()) throw ConfigError("at least one free parameter is required");
  for (const auto& name : names) {
    bool found = false;
    for (std::size_t e = 0; e < net.edge_count(); ++e) {
      for (char kind : {'A', 'E'}) {
        if (edge_param_name(kind, net.edges()[e]) != name) continue;
        for (const auto& f : free_) {
          if (f.name == name) throw ConfigError("free parameter listed twice: " + name);
        }
        free_.push_back({e, kind == 'A' ? ParamKind::kPreExponential : ParamKind::kActivationEnergy,
                         name});
        found = true;
      }
    }
    if (!found) throw ConfigError("free parameter does not name a network edge: " + name);
  }
}

RateParams ParameterMap::to_rates(const ParamVector& theta) const {
  if (static_cast<std::size_t>(theta.size()) != free_.size()) {
    throw PreconditionError("parameter vector has the wrong dimension");
  }
  RateParams r = base_;
  for (std::size_t i = 0; i < free_.size(); ++i) {
    const double v = theta[static_cast<Eigen::Index>(i)];
    if (free_[i].kind == ParamKind::kPreExponential) {
      r.pre_exponential[free_[i].edge] = v;
    } else {
      r.activation_energy[free_[i].edge] = v;
    }
  }
  return r;
}

ParamVector ParameterMap::base_vector() const {
  ParamVector v(static_cast<Eigen::Index>(free_.size()));
  for (std::size_t i = 0; i < free_.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = free_[i].kind == ParamKind::kPreExponential
                                          ? base_.pre_exponential[free_[i].edge]
                                          : base_.activation_energy[free_[i].edge];
  }
  return v;
}

std::vector<bool> ParameterMap::positivity_mask() const {
  std::vector<bool> m;
  for (const auto& f : free_) m.push_back(f.kind == ParamKind::kPreExponential);
  return m;
}

std::vector<std::string> ParameterMap::names() const {
  std::vector<std::string> out;
  for (const auto& f : free_) out.push_back(f.name);
  return out;
}

GaussianPrior::GaussianPrior(ParamVector mean, Eigen::MatrixXd covariance,
                             std::vector<bool> positivity_mask, double inflation)
    : mean_(std::move(mean)),
      cov_(std::move(covariance)),
      mask_(std::move(positivity_mask)),
      inflation_(inflation) {
  const auto n = mean_.size();
  if (n == 0) throw ConfigError("prior dimension must be >= 1");
  if (cov_.rows() != n || cov_.cols() != n) throw ConfigError("prior covariance shape mismatch");
  if (mask_.empty()) mask_.assign(static_cast<std::size_t>(n), false);
  if (mask_.size() != static_cast<std::size_t>(n)) throw ConfigError("positivity mask size mismatch");
  llt_.compute(cov_);
  if (llt_.info() != Eigen::Success) {
    throw NumericalError("prior covariance is not symmetric positive definite");
  }
  const Eigen::MatrixXd l = llt_.matrixL();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det += 2.0 * std::log(l(i, i));
  log_normalizer_ = -0.5 * (static_cast<double>(n) * std::log(2.0 * std::numbers::pi) + log_det);
}

double GaussianPrior::log_density(const ParamVector& theta) const {
  if (theta.size() != mean_.size()) throw PreconditionError("prior: dimension mismatch");
  const Eigen::VectorXd y = llt_.matrixL().solve(theta - mean_);
  double lp = log_normalizer_ - 0.5 * y.squaredNorm();
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i] && !(theta[static_cast<Eigen::Index>(i)] > 0.0)) {
      lp += kPositivityPenalty;
      break;
    }
  }
  return lp;
}

TruePosteriorTarget TruePosteriorTarget::with_prior(GaussianPrior p) const {
  TruePosteriorTarget t = *this;
  t.prior = std::move(p);
  return t;
}

double log_likelihood(const TruePosteriorTarget& target, const ParamVector& theta) {
  target.likelihood_calls->fetch_add(1, std::memory_order_relaxed);
  const RateParams rates = target.params.to_rates(theta);
  const double v = target.noise_var;
  const double norm = -0.5 * std::log(2.0 * std::numbers::pi * v);
  double ll = 0.0;
  for (std::size_t k = 0; k < target.experiments.size(); ++k) {
    const double out = target.model->output(rates, target.experiments[k]);
    if (!std::isfinite(out)) return -std::numeric_limits<double>::infinity();
    const double r = target.observations[k] - out;
    ll += -(r * r) / (2.0 * v) + norm;
  }
  return ll;
}

double log_true_posterior(const TruePosteriorTarget& target, const ParamVector& theta) {
  return log_likelihood(target, theta) + target.prior.log_density(theta);
}

double log_surrogate_posterior(const SurrogatePosterior& s, const ParamVector& theta) {
  return s.gp.predict_mean(theta) + s.prior.log_density(theta) + s.log_offset;
}

GaussianPrior gaussian_from_samples(const PointMatrix& samples, double inflation,
                                    std::vector<bool> mask, Eigen::MatrixXd* sample_covariance) {
  if (!(inflation >= 1.0)) throw ConfigError("prior inflation must be >= 1");
  const auto m = samples.rows();
  const auto n = samples.cols();
  if (m < n + 1) {
    throw NumericalError("too few preliminary samples to estimate a covariance; run a longer "
                         "preliminary chain");
  }
  const ParamVector mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(m - 1);
  cov = 0.5 * (cov + cov.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues().maxCoeff();
  const double bottom = eig.eigenvalues().minCoeff();
  if (!(top > 0.0) || bottom < 1e-14 * top) {
    std::ostringstream msg;
    msg << "preliminary samples are rank-deficient (eigenvalues in [" << bottom << ", " << top
        << "]); run a longer preliminary chain";
    throw NumericalError(msg.str());
  }
  if (sample_covariance != nullptr) *sample_covariance = cov;
  Eigen::MatrixXd scaled = inflation * cov;
  if (Eigen::LLT<Eigen::MatrixXd>(scaled).info() != Eigen::Success) {
    scaled.diagonal().array() += 1e-10 * scaled.trace() / static_cast<double>(n);
  }
  return GaussianPrior(mean, scaled, std::move(mask), inflation);
}

PriorBuildResult build_gaussian_prior(const TruePosteriorTarget& target,
                                      const PriorBuildConfig& cfg, std::uint64_t seed) {
  const std::size_t n = target.dim();
  const std::size_t walkers = cfg.walkers ? cfg.walkers : 2 * n;
  std::vector<double> logged;
  LogDensity density = [&target, &logged](const ParamVector& theta) {
    const double ll = log_likelihood(target, theta);
    if (std::isfinite(ll)) logged.push_back(ll);
    return ll + target.prior.log_density(theta);
  };
  EnsembleState state = init_walkers(walkers, cfg.init_center, cfg.init_spread, seed);
  ChainSamples chain = run_chain(state, density, cfg.sweeps, cfg.burn_in, cfg.stretch_a);
  Eigen::MatrixXd sample_cov;
  GaussianPrior prior =
      gaussian_from_samples(chain.samples, cfg.inflation, target.params.positivity_mask(), &sample_cov);
  return PriorBuildResult{std::move(prior), std::move(sample_cov), std::move(chain),
                          std::move(logged)};
}

}  // namespace gpsur
