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

#include <Eigen/Cholesky>

#include "gpsur/errors.hpp"
#include "gpsur/types.hpp"

namespace gpsur {

std::size_t uniform_index(Rng& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(rng);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PointMatrix sample_gaussian(std::size_t count, const ParamVector& mean, const Eigen::MatrixXd& cov,
                            Rng& rng) {
  const auto n = mean.size();
  if (cov.rows() != n || cov.cols() != n) {
    throw PreconditionError("sample_gaussian: covariance shape does not match mean");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw ConfigError("sample_gaussian: covariance is not symmetric positive definite");
  }
  const Eigen::MatrixXd lower = llt.matrixL();
  std::normal_distribution<double> normal(0.0, 1.0);
  PointMatrix out(static_cast<Eigen::Index>(count), n);
  Eigen::VectorXd xi(n);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index d = 0; d < n; ++d) xi[d] = normal(rng);
    out.row(r) = (mean + lower * xi).transpose();
  }
  return out;
}

}  // namespace gpsur
