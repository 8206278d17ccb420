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

#include "gpsur/simd/kernels.hpp"

namespace gpsur::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void squared_distances(const double* const* columns, std::size_t dim, std::size_t count,
                       const double* query, double* out) {
  for (std::size_t i = 0; i < count; ++i) out[i] = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double* col = columns[d];
    const double q = query[d];
    for (std::size_t i = 0; i < count; ++i) {
      const double diff = col[i] - q;
      out[i] = out[i] + diff * diff;
    }
  }
}

void forward_substitute_packed(const double* packed, std::size_t n, double* rhs) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = packed + i * (i + 1) / 2;
    rhs[i] = (rhs[i] - dot(row, rhs, i)) / row[i];
  }
}

}  // namespace gpsur::simd::scalar
