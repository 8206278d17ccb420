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

#include "gpsur/gp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "gpsur/errors.hpp"
#include "gpsur/simd/kernels.hpp"

namespace gpsur {

KernelParams::KernelParams(double variance, double length_scale)
    : variance_(variance), length_scale_(length_scale) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw ConfigError("kernel variance s^2 must be finite and > 0");
  }
  if (!(length_scale > 0.0) || !std::isfinite(length_scale)) {
    throw ConfigError("kernel length scale must be finite and > 0");
  }
}

double kernel_eval(const ParamVector& a, const ParamVector& b, const KernelParams& p) {
  if (a.size() != b.size()) {
    throw PreconditionError("kernel_eval: dimension mismatch");
  }
  const double ell = p.length_scale();
  return p.variance() * std::exp(-(a - b).squaredNorm() / (2.0 * ell * ell));
}

GpModel::GpModel(std::size_t dim, KernelParams kernel, double jitter)
    : dim_(dim), kernel_(kernel), jitter_(jitter), columns_(dim) {
  if (dim == 0) throw ConfigError("GP input dimension must be >= 1");
  if (!(jitter >= 0.0) || !std::isfinite(jitter)) throw ConfigError("GP jitter must be >= 0");
}

GpModel GpModel::fit(const TrainingSet& training, KernelParams kernel, double jitter) {
  const auto n = static_cast<std::size_t>(training.inputs.rows());
  if (n == 0) throw PreconditionError("gp_fit: training set is empty");
  if (training.outputs.size() != training.inputs.rows()) {
    throw PreconditionError("gp_fit: inputs and outputs differ in length");
  }
  GpModel model(static_cast<std::size_t>(training.inputs.cols()), kernel, jitter);
  model.outputs_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ParamVector x = training.inputs.row(static_cast<Eigen::Index>(i)).transpose();
    model.append_row(x);
    model.outputs_.push_back(training.outputs[static_cast<Eigen::Index>(i)]);
  }
  model.solve_weights();
  return model;
}

void GpModel::check_dim(const ParamVector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) {
    throw PreconditionError("GP: point dimension does not match model dimension");
  }
}

void GpModel::add_point(const ParamVector& x, double y) {
  check_dim(x);
  if (!std::isfinite(y)) throw PreconditionError("gp_add_point: output must be finite");
  if (size() > 0 && min_distance(x) == 0.0) {
    throw PreconditionError("gp_add_point: input duplicates an existing training input");
  }
  append_row(x);
  outputs_.push_back(y);
  solve_weights();
}

GpModel GpModel::with_point(const ParamVector& x, double y) const {
  GpModel copy = *this;
  copy.add_point(x, y);
  return copy;
}

void GpModel::cross_kernel(const ParamVector& x, std::vector<double>& k, bool& coincides) const {
  const std::size_t n = size();
  k.resize(n);
  coincides = false;
  if (n == 0) return;
  std::vector<const double*> cols(dim_);
  for (std::size_t d = 0; d < dim_; ++d) cols[d] = columns_[d].data();
  simd::squared_distances(cols.data(), dim_, n, x.data(), k.data());
  const double ell = kernel_.length_scale();
  const double scale = -1.0 / (2.0 * ell * ell);
  const double s2 = kernel_.variance();
  for (std::size_t i = 0; i < n; ++i) {
    if (k[i] == 0.0) coincides = true;
    k[i] = s2 * std::exp(k[i] * scale);
  }
}

void GpModel::append_row(const ParamVector& x) {
  check_dim(x);
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    if (!std::isfinite(x[d])) throw PreconditionError("GP: input coordinates must be finite");
  }
  const std::size_t n = size();
  std::vector<double> row;
  bool coincides = false;
  cross_kernel(x, row, coincides);
  double pivot = std::numeric_limits<double>::quiet_NaN();
  if (!coincides) {
    simd::forward_substitute_packed(packed_factor_.data(), n, row.data());
    pivot = kernel_.variance() + jitter_ - simd::dot(row.data(), row.data(), n);
  }
  if (coincides || !(pivot > 0.0) || !std::isfinite(pivot)) {
    // Locate the closest pair among the existing inputs and x.
    std::size_t best_a = 0, best_b = n;
    double best = std::numeric_limits<double>::infinity();
    std::vector<ParamVector> pts;
    pts.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(input(i));
    pts.push_back(x);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double dist = (pts[i] - pts[j]).norm();
        if (dist < best) {
          best = dist;
          best_a = i;
          best_b = j;
        }
      }
    }
    std::ostringstream msg;
    msg << "kernel matrix factorization failed at row " << n << " (pivot " << pivot
        << "); closest inputs are #" << best_a << " and #" << best_b << " at distance " << best;
    throw ConditioningError(msg.str(), best_a, best_b, best);
  }
  row.push_back(std::sqrt(pivot));
  packed_factor_.insert(packed_factor_.end(), row.begin(), row.end());
  for (std::size_t d = 0; d < dim_; ++d) columns_[d].push_back(x[static_cast<Eigen::Index>(d)]);
}

void GpModel::solve_weights() {
  const std::size_t n = size();
  weights_ = outputs_;
  simd::forward_substitute_packed(packed_factor_.data(), n, weights_.data());
  // Back substitution with L^T, walking the packed rows from the bottom.
  for (std::size_t i = n; i-- > 0;) {
    const double* row = packed_factor_.data() + i * (i + 1) / 2;
    weights_[i] /= row[i];
    const double wi = weights_[i];
    for (std::size_t j = 0; j < i; ++j) weights_[j] -= row[j] * wi;
  }
}

double GpModel::predict_mean(const ParamVector& x) const {
  check_dim(x);
  if (size() == 0) return 0.0;
  std::vector<double> k;
  bool coincides = false;
  cross_kernel(x, k, coincides);
  return simd::dot(k.data(), weights_.data(), size());
}

double GpModel::predict_var(const ParamVector& x) const { return predict(x).variance; }

Prediction GpModel::predict(const ParamVector& x) const {
  check_dim(x);
  const double s2 = kernel_.variance();
  const std::size_t n = size();
  if (n == 0) return {0.0, s2};
  std::vector<double> k;
  bool coincides = false;
  cross_kernel(x, k, coincides);
  const double mean = simd::dot(k.data(), weights_.data(), n);
  // The latent function is observed exactly at its training inputs; the
  // nugget only stabilizes the factorization.
  if (coincides) return {mean, 0.0};
  simd::forward_substitute_packed(packed_factor_.data(), n, k.data());
  double var = s2 - simd::dot(k.data(), k.data(), n);
  if (var < 0.0) {
    if (var < -kVarianceClampTolerance * s2) {
      std::ostringstream msg;
      msg << "GP predictive variance " << var << " is negative beyond round-off (s^2 = " << s2
          << ")";
      throw NumericalError(msg.str());
    }
    var = 0.0;
  }
  return {mean, var};
}

ParamVector GpModel::input(std::size_t i) const {
  ParamVector x(static_cast<Eigen::Index>(dim_));
  for (std::size_t d = 0; d < dim_; ++d) x[static_cast<Eigen::Index>(d)] = columns_[d][i];
  return x;
}

TrainingSet GpModel::training_set() const {
  TrainingSet t;
  const auto n = static_cast<Eigen::Index>(size());
  t.inputs.resize(n, static_cast<Eigen::Index>(dim_));
  t.outputs.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim_; ++d) {
      t.inputs(i, static_cast<Eigen::Index>(d)) = columns_[d][static_cast<std::size_t>(i)];
    }
    t.outputs[i] = outputs_[static_cast<std::size_t>(i)];
  }
  return t;
}

Eigen::MatrixXd GpModel::factor() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* row = packed_factor_.data() + i * (i + 1) / 2;
    for (Eigen::Index j = 0; j <= i; ++j) l(i, j) = row[j];
  }
  return l;
}

double GpModel::min_distance(const ParamVector& x) const {
  check_dim(x);
  const std::size_t n = size();
  if (n == 0) return std::numeric_limits<double>::infinity();
  std::vector<const double*> cols(dim_);
  for (std::size_t d = 0; d < dim_; ++d) cols[d] = columns_[d].data();
  std::vector<double> d2(n);
  simd::squared_distances(cols.data(), dim_, n, x.data(), d2.data());
  double best = d2[0];
  for (double v : d2) best = std::min(best, v);
  return std::sqrt(best);
}

}  // namespace gpsur
