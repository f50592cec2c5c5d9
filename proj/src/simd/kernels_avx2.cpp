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

// Built with -mavx2 -mfma. Only reachable through the dispatcher after a
// CPU feature check.

#include <immintrin.h>

#include <cstring>

#include "permsync/simd/kernels.hpp"

namespace permsync::simd::avx2 {
namespace {

inline int popcount8(__m256i eq) {
  return __builtin_popcount(static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(eq))));
}

int count_equal(const std::int32_t* a, const std::int32_t* b, std::size_t m) {
  std::size_t r = 0;
  int n = 0;
  for (; r + 8 <= m; r += 8) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + r));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + r));
    n += popcount8(_mm256_cmpeq_epi32(va, vb));
  }
  for (; r < m; ++r) n += (a[r] == b[r]);
  return n;
}

int count_composed_matches(const std::int32_t* first, const std::int32_t* second,
                           const std::int32_t* target, std::size_t m) {
  std::size_t r = 0;
  int n = 0;
  for (; r + 8 <= m; r += 8) {
    const __m256i idx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(first + r));
    const __m256i composed = _mm256_i32gather_epi32(second, idx, 4);
    const __m256i vt = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(target + r));
    n += popcount8(_mm256_cmpeq_epi32(composed, vt));
  }
  for (; r < m; ++r) n += (second[first[r]] == target[r]);
  return n;
}

inline __m256d load_counts4(const std::uint8_t* c) {
  std::int32_t packed;
  std::memcpy(&packed, c, sizeof(packed));
  return _mm256_cvtepi32_pd(_mm_cvtepu8_epi32(_mm_cvtsi32_si128(packed)));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

PairSums weighted_pair_sums(const double* a, const double* b, const std::uint8_t* counts,
                            std::size_t n) {
  __m256d num0 = _mm256_setzero_pd(), num1 = _mm256_setzero_pd();
  __m256d den0 = _mm256_setzero_pd(), den1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256d w0 = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    const __m256d w1 = _mm256_mul_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4));
    num0 = _mm256_fmadd_pd(w0, load_counts4(counts + k), num0);
    num1 = _mm256_fmadd_pd(w1, load_counts4(counts + k + 4), num1);
    den0 = _mm256_add_pd(den0, w0);
    den1 = _mm256_add_pd(den1, w1);
  }
  for (; k + 4 <= n; k += 4) {
    const __m256d w0 = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    num0 = _mm256_fmadd_pd(w0, load_counts4(counts + k), num0);
    den0 = _mm256_add_pd(den0, w0);
  }
  PairSums s;
  s.weighted = hsum(_mm256_add_pd(num0, num1));
  s.total = hsum(_mm256_add_pd(den0, den1));
  for (; k < n; ++k) {
    const double w = a[k] * b[k];
    s.weighted += w * counts[k];
    s.total += w;
  }
  return s;
}

}  // namespace

const KernelTable kTable = {Isa::kAvx2, &count_equal, &count_composed_matches,
                            &weighted_pair_sums};

}  // namespace permsync::simd::avx2
