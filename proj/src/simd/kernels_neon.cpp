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

// AArch64 only; NEON is mandatory there so no runtime check is needed.

#include <arm_neon.h>

#include "permsync/simd/kernels.hpp"

namespace permsync::simd::neon {
namespace {

int count_equal(const std::int32_t* a, const std::int32_t* b, std::size_t m) {
  std::size_t r = 0;
  int n = 0;
  for (; r + 4 <= m; r += 4) {
    const uint32x4_t eq = vceqq_s32(vld1q_s32(a + r), vld1q_s32(b + r));
    n += static_cast<int>(vaddvq_u32(vshrq_n_u32(eq, 31)));
  }
  for (; r < m; ++r) n += (a[r] == b[r]);
  return n;
}

int count_composed_matches(const std::int32_t* first, const std::int32_t* second,
                           const std::int32_t* target, std::size_t m) {
  // No gather on NEON; compose into a small buffer and compare lane-wise.
  std::size_t r = 0;
  int n = 0;
  for (; r + 4 <= m; r += 4) {
    const std::int32_t composed[4] = {second[first[r]], second[first[r + 1]],
                                      second[first[r + 2]], second[first[r + 3]]};
    const uint32x4_t eq = vceqq_s32(vld1q_s32(composed), vld1q_s32(target + r));
    n += static_cast<int>(vaddvq_u32(vshrq_n_u32(eq, 31)));
  }
  for (; r < m; ++r) n += (second[first[r]] == target[r]);
  return n;
}

PairSums weighted_pair_sums(const double* a, const double* b, const std::uint8_t* counts,
                            std::size_t n) {
  float64x2_t num = vdupq_n_f64(0.0), den = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t w = vmulq_f64(vld1q_f64(a + k), vld1q_f64(b + k));
    const double c[2] = {static_cast<double>(counts[k]), static_cast<double>(counts[k + 1])};
    num = vfmaq_f64(num, w, vld1q_f64(c));
    den = vaddq_f64(den, w);
  }
  PairSums s;
  s.weighted = vaddvq_f64(num);
  s.total = vaddvq_f64(den);
  for (; k < n; ++k) {
    const double w = a[k] * b[k];
    s.weighted += w * counts[k];
    s.total += w;
  }
  return s;
}

}  // namespace

const KernelTable kTable = {Isa::kNeon, &count_equal, &count_composed_matches,
                            &weighted_pair_sums};

}  // namespace permsync::simd::neon
