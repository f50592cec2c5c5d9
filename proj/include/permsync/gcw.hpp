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

// Graph connection weight (GCW) operator S = (W kron 1_m) .* X~ and the
// path-averaged block estimates built from its powers.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "permsync/graph.hpp"
#include "permsync/permutation.hpp"

namespace permsync {

/// Path weights (W^l)(i, j) at or below this value count as "no path".
inline constexpr double kMinPathWeight = 1e-12;

/// Sparse block operator with S[i, j] = w_ij X~_ij on measured edges.
///
/// Holds a reference to the measurement, which must outlive the operator.
class GcwOperator {
 public:
  GcwOperator(const BlockMeasurement& meas, std::vector<double> weights);

  const BlockMeasurement& measurement() const { return *meas_; }
  const Graph& graph() const { return *meas_->graph(); }
  int num_nodes() const { return meas_->num_nodes(); }
  int block_size() const { return meas_->block_size(); }

  /// Weight on the measurement edge e.
  double weight(EdgeId e) const { return weights_[static_cast<std::size_t>(e)]; }
  std::span<const double> weights() const { return weights_; }
  /// Symmetric n x n weight matrix (row-major).
  std::vector<double> dense_weights() const;

  /// Dense (nm x nm) row-major assembly.
  std::vector<double> densify() const;

 private:
  const BlockMeasurement* meas_;
  std::vector<double> weights_;
};

/// S = (W kron 1_m) .* X~. Edges of W must be measured; an unmeasured edge
/// with nonzero weight throws InputError.
GcwOperator build_gcw(const WeightedGraph& w, const BlockMeasurement& meas);

/// Per-edge <S[i, j], B[i, j]>. Throws InputError on shape mismatch.
EdgeValues block_inner(const GcwOperator& s, const BlockMeasurement& b);

/// Per-edge <T_e, X~_e> for a table of blocks indexed like the edges.
EdgeValues block_inner(std::span<const SquareBlock> table, const BlockMeasurement& b);

struct RatioTable {
  std::vector<SquareBlock> blocks;  // S^l[i, j] / W^l(i, j), or the fallback
  std::vector<double> path_weight;  // W^l(i, j)
  std::vector<char> fell_back;
};

using BlockFallback = std::function<SquareBlock(EdgeId)>;

/// S^l ./ (W^l kron 1_m) restricted to the measured edges, l >= 2.
///
/// Each block is the weighted average of the path products
/// X~_{i k1} X~_{k1 k2} ... X~_{k_{l-1} j} over walks of length l. Edges with
/// W^l(i, j) <= kMinPathWeight receive fallback(e).
RatioTable squared_gcw_ratio(const GcwOperator& s, int power, const BlockFallback& fallback);

/// For every edge ij and every node k, the agreement
/// <X~_ik X~_kj, X~_ij> in {0, ..., m} (zero when k is not a common
/// neighbour). Depends on X~ only, so it is built once per instance and
/// reused by every reweighting step.
class TriangleTable {
 public:
  explicit TriangleTable(const BlockMeasurement& meas);

  int num_nodes() const { return n_; }
  int block_size() const { return m_; }
  std::span<const std::uint8_t> row(EdgeId e) const {
    return {counts_.data() + static_cast<std::size_t>(e) * static_cast<std::size_t>(n_),
            static_cast<std::size_t>(n_)};
  }

 private:
  int n_;
  int m_;
  std::vector<std::uint8_t> counts_;
};

struct CycleAffinity {
  std::vector<double> values;  // <S^2 ./ W^2 [i, j], X~_ij> / m, or the fallback
  std::vector<char> fell_back;
};

/// Second-order affinity <(S^2 ./ W^2)[i, j], X~_ij> / m for every edge.
///
/// Equal to block_inner of squared_gcw_ratio(..., 2, ...) divided by m, but
/// computed from the triangle table with the SIMD pair-sum kernel. Edges
/// without a weighted 2-path get fallback[e].
CycleAffinity cycle_affinity(const TriangleTable& table, const GcwOperator& s,
                             std::span<const double> fallback);

}  // namespace permsync
