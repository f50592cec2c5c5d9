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

#pragma once

#include <cstdint>
#include <random>

namespace permsync {

/// 64-bit finalizer from SplitMix64. A bijection on 64-bit words with good
/// avalanche, used to derive independent seeds from structured indices.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for trial `trial` of sweep point `sweep_index` under `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t sweep_index,
                                    std::uint64_t trial) {
  return mix64(mix64(mix64(master) ^ sweep_index) ^ (trial + 0x632be59bd9b4e019ULL));
}

/// Deterministic random source keyed by (seed, stream).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard library distributions are not, so the bounded
/// integer and unit-interval draws are implemented here from raw engine
/// output. Same (seed, stream) gives the same samples on every platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), engine_(mix64(seed ^ mix64(stream + 1))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// true with probability p.
  bool bernoulli(double p) { return uniform01() < p; }

  /// Independent child generator.
  SeededRng split(std::uint64_t child) { return SeededRng(next_u64(), child); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace permsync
