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

#include <cstdlib>
#include <cstring>

#include "gpsur/simd/kernels.hpp"

namespace gpsur::simd {

namespace {

struct KernelTable {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  void (*squared_distances)(const double* const*, std::size_t, std::size_t, const double*,
                            double*);
  void (*forward_substitute_packed)(const double*, std::size_t, double*);
};

constexpr KernelTable kScalarTable{Isa::kScalar, &scalar::dot, &scalar::squared_distances,
                                   &scalar::forward_substitute_packed};
#if defined(GPSUR_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Isa::kAvx2, &avx2::dot, &avx2::squared_distances,
                                 &avx2::forward_substitute_packed};
#endif

const KernelTable& table_for(Isa isa) {
#if defined(GPSUR_HAVE_AVX2)
  if (isa == Isa::kAvx2 && avx2_available()) return kAvx2Table;
#else
  (void)isa;
#endif
  return kScalarTable;
}

const KernelTable* initial_table() {
  const char* env = std::getenv("GPSUR_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &kScalarTable;
  return &table_for(Isa::kAvx2);
}

const KernelTable*& current() {
  static const KernelTable* table = initial_table();
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(GPSUR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() { return current()->isa; }

void set_isa(Isa isa) { current() = &table_for(isa); }

double dot(const double* a, const double* b, std::size_t n) { return current()->dot(a, b, n); }

void squared_distances(const double* const* columns, std::size_t dim, std::size_t count,
                       const double* query, double* out) {
  current()->squared_distances(columns, dim, count, query, out);
}

void forward_substitute_packed(const double* packed, std::size_t n, double* rhs) {
  current()->forward_substitute_packed(packed, n, rhs);
}

}  // namespace gpsur::simd
