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

#include "permsync/simd/kernels.hpp"

namespace permsync::simd::scalar {
namespace {

int count_equal(const std::int32_t* a, const std::int32_t* b, std::size_t m) {
  int n = 0;
  for (std::size_t r = 0; r < m; ++r) n += (a[r] == b[r]);
  return n;
}

int count_composed_matches(const std::int32_t* first, const std::int32_t* second,
                           const std::int32_t* target, std::size_t m) {
  int n = 0;
  for (std::size_t r = 0; r < m; ++r) n += (second[first[r]] == target[r]);
  return n;
}

PairSums weighted_pair_sums(const double* a, const double* b, const std::uint8_t* counts,
                            std::size_t n) {
  PairSums s;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = a[k] * b[k];
    s.weighted += w * counts[k];
    s.total += w;
  }
  return s;
}

}  // namespace

const KernelTable kTable = {Isa::kScalar, &count_equal, &count_composed_matches,
                            &weighted_pair_sums};

}  // namespace permsync::simd::scalar
