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

// Exact Gaussian-process regression with a fixed isotropic squared-exponential
// kernel and zero prior mean.
//
// The kernel matrix factor is kept in packed lower-triangular row storage and
// grown one row at a time. Fitting N points is literally N appends, so a model
// built incrementally is bit-identical to one fitted in a single call on the
// same ordered training set.

#include <cstddef>
#include <vector>

#include "gpsur/types.hpp"

namespace gpsur {

/// Signal variance s^2 and correlation length ell; both fixed after construction.
class KernelParams {
 public:
  KernelParams(double variance, double length_scale);

  double variance() const noexcept { return variance_; }
  double length_scale() const noexcept { return length_scale_; }

 private:
  double variance_;
  double length_scale_;
};

/// s^2 exp(-|a-b|^2 / (2 ell^2)).
double kernel_eval(const ParamVector& a, const ParamVector& b, const KernelParams& p);

struct TrainingSet {
  PointMatrix inputs;       // one point per row
  Eigen::VectorXd outputs;  // observed log-likelihood values
};

struct Prediction {
  double mean;
  double variance;
};

class GpModel {
 public:
  /// Relative nugget added to the kernel diagonal by default (times s^2).
  static constexpr double kDefaultRelativeJitter = 1e-8;
  /// Negative variances down to -kVarianceClampTolerance * s^2 are round-off.
  static constexpr double kVarianceClampTolerance = 1e-10;

  /// Model with no training data; predicts mean 0 and variance s^2 everywhere.
  GpModel(std::size_t dim, KernelParams kernel, double jitter);

  /// Factorize K + jitter*I for the given training set (N >= 1, distinct inputs).
  /// Throws ConditioningError naming the closest pair when factorization fails.
  static GpModel fit(const TrainingSet& training, KernelParams kernel, double jitter);

  /// Append one observation. Throws PreconditionError if x duplicates an input.
  void add_point(const ParamVector& x, double y);

  /// Copy of this model with one more observation.
  GpModel with_point(const ParamVector& x, double y) const;

  double predict_mean(const ParamVector& x) const;

  /// Predictive variance in [0, s^2]. Exactly 0 at a training input.
  double predict_var(const ParamVector& x) const;

  Prediction predict(const ParamVector& x) const;

  std::size_t size() const noexcept { return outputs_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const KernelParams& kernel() const noexcept { return kernel_; }
  double jitter() const noexcept { return jitter_; }

  ParamVector input(std::size_t i) const;
  double output(std::size_t i) const { return outputs_[i]; }
  const std::vector<double>& outputs() const noexcept { return outputs_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  TrainingSet training_set() const;

  /// Dense copy of the lower-triangular factor (for inspection and tests).
  Eigen::MatrixXd factor() const;

  /// Smallest Euclidean distance from x to any training input (+inf if empty).
  double min_distance(const ParamVector& x) const;

 private:
  void check_dim(const ParamVector& x) const;
  void append_row(const ParamVector& x);
  void solve_weights();
  // k(x, theta_i) for all i; sets `coincides` when x equals a training input.
  void cross_kernel(const ParamVector& x, std::vector<double>& k, bool& coincides) const;

  std::size_t dim_;
  KernelParams kernel_;
  double jitter_;
  std::vector<std::vector<double>> columns_;  // coordinate-major inputs
  std::vector<double> outputs_;
  std::vector<double> packed_factor_;
  std::vector<double> weights_;
};

/// Functional forms mirroring the member API.
inline GpModel gp_fit(const TrainingSet& t, const KernelParams& p, double jitter) {
  return GpModel::fit(t, p, jitter);
}
inline GpModel gp_add_point(const GpModel& m, const ParamVector& x, double y) {
  return m.with_point(x, y);
}

}  // namespace gpsur
