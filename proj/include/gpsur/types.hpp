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

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace gpsur {

/// A point in parameter space.
using ParamVector = Eigen::VectorXd;

/// A set of points, one per row.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one generator word.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n) for n >= 1.
std::size_t uniform_index(Rng& rng, std::size_t n);

/// Independent child seed for a named stream of a base seed (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Draw `count` Gaussian points with the given mean and covariance (rows of the result).
PointMatrix sample_gaussian(std::size_t count, const ParamVector& mean, const Eigen::MatrixXd& cov,
                            Rng& rng);

}  // namespace gpsur
