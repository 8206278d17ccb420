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

#include <stdexcept>
#include <string>

namespace gpsur {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or input (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Numerical-health failure: factorization breakdown, negative variance
/// beyond round-off, degenerate sample sets (CLI exit code 2).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Kernel matrix could not be factorized. Carries the closest pair of
/// training inputs, which is almost always the culprit.
class ConditioningError : public NumericalError {
 public:
  ConditioningError(const std::string& what, std::size_t first, std::size_t second,
                    double distance)
      : NumericalError(what), first_(first), second_(second), distance_(distance) {}

  std::size_t first_index() const noexcept { return first_; }
  std::size_t second_index() const noexcept { return second_; }
  double distance() const noexcept { return distance_; }

 private:
  std::size_t first_;
  std::size_t second_;
  double distance_;
};

/// No search candidate satisfies the minimum-distance rule.
class SaturationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Filesystem or artifact problem (CLI exit code 3).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gpsur
