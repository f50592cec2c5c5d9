// Copyright 2026 The permsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Data-parallel inner loops shared by the solvers.
//
// Every kernel has a scalar reference implementation plus optional AVX2 and
// NEON variants. The variant is chosen once at first use from the CPU
// features, unless PERMSYNC_SIMD=scalar|avx2|neon forces one. Integer
// kernels are bit-identical across variants; the floating-point reduction
// differs from the scalar one only in summation order.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace permsync::simd {

enum class Isa { kScalar, kAvx2, kNeon };

struct PairSums {
  double weighted = 0.0;  // sum_k a[k] * b[k] * counts[k]
  double total = 0.0;     // sum_k a[k] * b[k]
};

struct KernelTable {
  Isa isa;
  // #{r < m : a[r] == b[r]}
  int (*count_equal)(const std::int32_t* a, const std::int32_t* b, std::size_t m);
  // #{r < m : second[first[r]] == target[r]}; the agreement of the
  // composed permutation (first * second) with target.
  int (*count_composed_matches)(const std::int32_t* first, const std::int32_t* second,
                                const std::int32_t* target, std::size_t m);
  PairSums (*weighted_pair_sums)(const double* a, const double* b, const std::uint8_t* counts,
                                 std::size_t n);
};

namespace scalar {
extern const KernelTable kTable;
}
#if defined(PERMSYNC_HAVE_AVX2)
namespace avx2 {
extern const KernelTable kTable;
}
#endif
#if defined(PERMSYNC_HAVE_NEON)
namespace neon {
extern const KernelTable kTable;
}
#endif

std::string_view isa_name(Isa isa);

/// ISAs compiled in and supported by the running CPU.
std::vector<Isa> available_isas();

/// Throws InputError if `isa` is not available.
const KernelTable& table_for(Isa isa);

/// Table selected for this process.
const KernelTable& active();

inline int count_equal(const std::int32_t* a, const std::int32_t* b, std::size_t m) {
  return active().count_equal(a, b, m);
}
inline int count_composed_matches(const std::int32_t* first, const std::int32_t* second,
                                  const std::int32_t* target, std::size_t m) {
  return active().count_composed_matches(first, second, target, m);
}
inline PairSums weighted_pair_sums(const double* a, const double* b, const std::uint8_t* counts,
                                   std::size_t n) {
  return active().weighted_pair_sums(a, b, counts, n);
}

}  // namespace permsync::simd
