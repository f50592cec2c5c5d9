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

#include "permsync/gcw.hpp"

#include <cmath>
#include <string>

#include "permsync/error.hpp"
#include "permsync/simd/kernels.hpp"

namespace permsync {

GcwOperator::GcwOperator(const BlockMeasurement& meas, std::vector<double> weights)
    : meas_(&meas), weights_(std::move(weights)) {
  if (weights_.size() != static_cast<std::size_t>(meas.graph()->num_edges())) {
    throw InputError("gcw: weight count does not match measured edges");
  }
}

std::vector<double> GcwOperator::dense_weights() const {
  return EdgeValues(meas_->graph(), weights_).dense();
}

std::vector<double> GcwOperator::densify() const {
  const std::size_t n = static_cast<std::size_t>(num_nodes());
  const std::size_t m = static_cast<std::size_t>(block_size());
  const std::size_t dim = n * m;
  std::vector<double> out(dim * dim, 0.0);
  const Graph& g = graph();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    const double w = weights_[static_cast<std::size_t>(e)];
    const Permutation& x = meas_->block(e);
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t c = static_cast<std::size_t>(x[static_cast<int>(r)]);
      out[(i * m + r) * dim + j * m + c] = w;  // X~_ij
      out[(j * m + c) * dim + i * m + r] = w;  // X~_ji = X~_ij^T
    }
  }
  return out;
}

GcwOperator build_gcw(const WeightedGraph& w, const BlockMeasurement& meas) {
  const Graph& mg = *meas.graph();
  std::vector<double> weights(static_cast<std::size_t>(mg.num_edges()), 0.0);
  if (w.num_nodes() != mg.num_nodes()) throw InputError("gcw: node count mismatch");
  const Graph& wg = *w.graph();
  for (EdgeId e = 0; e < wg.num_edges(); ++e) {
    const auto [i, j] = wg.edge(e);
    const EdgeId me = mg.find(i, j);
    if (me < 0) {
      if (w[e] != 0.0) {
        throw InputError("gcw: weighted edge " + std::to_string(i) + "-" + std::to_string(j) +
                         " has no measurement");
      }
      continue;
    }
    weights[static_cast<std::size_t>(me)] = w[e];
  }
  return GcwOperator(meas, std::move(weights));
}

EdgeValues block_inner(const GcwOperator& s, const BlockMeasurement& b) {
  const Graph& g = s.graph();
  if (b.num_nodes() != s.num_nodes() || b.block_size() != s.block_size() ||
      b.graph()->num_edges() != g.num_edges()) {
    throw InputError("block_inner: shape mismatch");
  }
  std::vector<double> out(static_cast<std::size_t>(g.num_edges()));
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    if (b.graph()->find(i, j) < 0) throw InputError("block_inner: edge support mismatch");
    out[static_cast<std::size_t>(e)] =
        s.weight(e) * s.measurement().block(e).agreement(b.block(i, j));
  }
  return EdgeValues(s.measurement().graph(), std::move(out));
}

EdgeValues block_inner(std::span<const SquareBlock> table, const BlockMeasurement& b) {
  if (table.size() != static_cast<std::size_t>(b.graph()->num_edges())) {
    throw InputError("block_inner: table size does not match edge count");
  }
  std::vector<double> out(table.size());
  for (std::size_t e = 0; e < table.size(); ++e) {
    if (table[e].size() != b.block_size()) throw InputError("block_inner: block size mismatch");
    out[e] = table[e].inner(b.block(static_cast<EdgeId>(e)));
  }
  return EdgeValues(b.graph(), std::move(out));
}

namespace {

RatioTable ratio_two_paths(const GcwOperator& s, const BlockFallback& fallback) {
  const Graph& g = s.graph();
  const BlockMeasurement& x = s.measurement();
  const int m = s.block_size();
  RatioTable out;
  out.blocks.reserve(static_cast<std::size_t>(g.num_edges()));
  out.path_weight.resize(static_cast<std::size_t>(g.num_edges()));
  out.fell_back.resize(static_cast<std::size_t>(g.num_edges()));
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    SquareBlock acc(m);
    double total = 0.0;
    for (int k : g.common_neighbors(i, j)) {
      const double w = s.weight(g.find(i, k)) * s.weight(g.find(k, j));
      if (w == 0.0) continue;
      acc.add_permutation(compose(x.block(i, k), x.block(k, j)), w);
      total += w;
    }
    out.path_weight[static_cast<std::size_t>(e)] = total;
    if (total <= kMinPathWeight) {
      out.blocks.push_back(fallback(e));
      out.fell_back[static_cast<std::size_t>(e)] = 1;
    } else {
      acc *= 1.0 / total;
      out.blocks.push_back(std::move(acc));
    }
  }
  return out;
}

// Level-by-level walk extension: level[a * n + b] holds S^k[a, b] and
// weight[a * n + b] holds W^k(a, b).
RatioTable ratio_long_paths(const GcwOperator& s, int power, const BlockFallback& fallback) {
  const Graph& g = s.graph();
  const BlockMeasurement& x = s.measurement();
  const int n = s.num_nodes();
  const int m = s.block_size();
  const auto at = [n](int a, int b) { return static_cast<std::size_t>(a) * n + b; };

  std::vector<SquareBlock> level(static_cast<std::size_t>(n) * n, SquareBlock(m));
  std::vector<double> weight(static_cast<std::size_t>(n) * n, 0.0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    const double w = s.weight(e);
    level[at(i, j)].add_permutation(x.block(i, j), w);
    level[at(j, i)].add_permutation(x.block(j, i), w);
    weight[at(i, j)] = weight[at(j, i)] = w;
  }

  for (int k = 2; k <= power; ++k) {
    std::vector<SquareBlock> next(static_cast<std::size_t>(n) * n, SquareBlock(m));
    std::vector<double> next_weight(static_cast<std::size_t>(n) * n, 0.0);
    for (int a = 0; a < n; ++a) {
      for (int h = 0; h < n; ++h) {
        const double wah = weight[at(a, h)];
        if (wah == 0.0) continue;
        const SquareBlock& t = level[at(a, h)];
        for (int b : g.neighbors(h)) {
          const double whb = s.weight(g.find(h, b));
          if (whb == 0.0) continue;
          const Permutation& xhb = x.block(h, b);
          SquareBlock& dst = next[at(a, b)];
          for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) dst(r, xhb[c]) += whb * t(r, c);
          }
          next_weight[at(a, b)] += wah * whb;
        }
      }
    }
    level = std::move(next);
    weight = std::move(next_weight);
  }

  RatioTable out;
  out.blocks.reserve(static_cast<std::size_t>(g.num_edges()));
  out.path_weight.resize(static_cast<std::size_t>(g.num_edges()));
  out.fell_back.resize(static_cast<std::size_t>(g.num_edges()));
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    const double total = weight[at(i, j)];
    out.path_weight[static_cast<std::size_t>(e)] = total;
    if (total <= kMinPathWeight) {
      out.blocks.push_back(fallback(e));
      out.fell_back[static_cast<std::size_t>(e)] = 1;
    } else {
      SquareBlock b = std::move(level[at(i, j)]);
      b *= 1.0 / total;
      out.blocks.push_back(std::move(b));
    }
  }
  return out;
}

}  // namespace

RatioTable squared_gcw_ratio(const GcwOperator& s, int power, const BlockFallback& fallback) {
  if (power < 2) throw InputError("squared_gcw_ratio: power must be >= 2");
  return power == 2 ? ratio_two_paths(s, fallback) : ratio_long_paths(s, power, fallback);
}

TriangleTable::TriangleTable(const BlockMeasurement& meas)
    : n_(meas.num_nodes()), m_(meas.block_size()) {
  if (m_ > 255) throw InputError("triangle table supports block sizes up to 255");
  const Graph& g = *meas.graph();
  counts_.assign(static_cast<std::size_t>(g.num_edges()) * static_cast<std::size_t>(n_), 0);
  const auto m = static_cast<std::size_t>(m_);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    const Permutation& xij = meas.block(e);
    std::uint8_t* row = counts_.data() + static_cast<std::size_t>(e) * static_cast<std::size_t>(n_);
    for (int k : g.common_neighbors(i, j)) {
      row[k] = static_cast<std::uint8_t>(simd::count_composed_matches(
          meas.block(i, k).data(), meas.block(k, j).data(), xij.data(), m));
    }
  }
}

CycleAffinity cycle_affinity(const TriangleTable& table, const GcwOperator& s,
                             std::span<const double> fallback) {
  const Graph& g = s.graph();
  if (table.num_nodes() != s.num_nodes() || table.block_size() != s.block_size()) {
    throw InputError("cycle_affinity: table does not match operator");
  }
  if (fallback.size() != static_cast<std::size_t>(g.num_edges())) {
    throw InputError("cycle_affinity: fallback size mismatch");
  }
  const std::size_t n = static_cast<std::size_t>(s.num_nodes());
  const std::vector<double> w = s.dense_weights();
  const double inv_m = 1.0 / s.block_size();
  CycleAffinity out;
  out.values.resize(static_cast<std::size_t>(g.num_edges()));
  out.fell_back.resize(static_cast<std::size_t>(g.num_edges()));
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    const simd::PairSums sums = simd::weighted_pair_sums(
        w.data() + static_cast<std::size_t>(i) * n, w.data() + static_cast<std::size_t>(j) * n,
        table.row(e).data(), n);
    if (sums.total <= kMinPathWeight) {
      out.values[static_cast<std::size_t>(e)] = fallback[static_cast<std::size_t>(e)];
      out.fell_back[static_cast<std::size_t>(e)] = 1;
    } else {
      // Rounding can push the ratio a hair above 1.
      out.values[static_cast<std::size_t>(e)] = std::min(1.0, sums.weighted / sums.total * inv_m);
    }
  }
  return out;
}

}  // namespace permsync
