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

// Helpers shared by the solver translation units. Not installed.

#pragma once

#include <chrono>
#include <span>
#include <vector>

#include "permsync/graph.hpp"
#include "permsync/permutation.hpp"

namespace permsync::detail {

/// Per-edge <P_i P_j^T, X~_ij>, computed as #{r : P_j[X~_ij[r]] == P_i[r]}.
std::vector<int> edge_agreements(const BlockMeasurement& meas, const std::vector<Permutation>& p);

/// Weights of a WeightedGraph re-indexed by the measurement's edge ids.
std::vector<double> weights_on(const BlockMeasurement& meas, const WeightedGraph& w);

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace permsync::detail
