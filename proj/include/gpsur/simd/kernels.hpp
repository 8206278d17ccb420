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

// Data-parallel inner loops of the GP hot path.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2 variant. The public entry points dispatch through a table chosen once
// at startup from the CPU feature bits (override with GPSUR_SIMD=scalar|avx2 in
// the environment, or set_isa()). The scalar and vector variants are checked
// against each other in tests/simd_test.cpp.

#include <cstddef>
#include <string_view>

namespace gpsur::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

/// True when this binary carries AVX2 kernels and the CPU supports AVX2+FMA.
bool avx2_available();

/// Currently dispatched instruction set.
Isa active_isa();

/// Switch the process-wide dispatch. Requesting kAvx2 when it is unavailable
/// falls back to kScalar. Not thread-safe with respect to concurrent kernel calls.
void set_isa(Isa isa);

/// Sum of a[i]*b[i].
double dot(const double* a, const double* b, std::size_t n);

/// out[i] = sum_d (columns[d][i] - query[d])^2 for i < count.
/// Points are stored column-wise (one contiguous array per coordinate).
/// Both variants evaluate each element with the same operation order, so the
/// results are bit-identical across ISAs.
void squared_distances(const double* const* columns, std::size_t dim, std::size_t count,
                       const double* query, double* out);

/// In-place solve L x = b for a lower-triangular L in packed row-major storage
/// (row i occupies i+1 consecutive entries starting at i*(i+1)/2).
void forward_substitute_packed(const double* packed, std::size_t n, double* rhs);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void squared_distances(const double* const* columns, std::size_t dim, std::size_t count,
                       const double* query, double* out);
void forward_substitute_packed(const double* packed, std::size_t n, double* rhs);
}  // namespace scalar

#if defined(GPSUR_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void squared_distances(const double* const* columns, std::size_t dim, std::size_t count,
                       const double* query, double* out);
void forward_substitute_packed(const double* packed, std::size_t n, double* rhs);
}  // namespace avx2
#endif

}  // namespace gpsur::simd
