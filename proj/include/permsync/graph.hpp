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
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "permsync/permutation.hpp"

namespace permsync {

/// Unordered edge stored with i < j.
struct Edge {
  int i = 0;
  int j = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

using EdgeId = int;

/// Immutable simple undirected graph on nodes {0, ..., n-1}.
///
/// Edges are kept sorted lexicographically; EdgeId is the position in that
/// order. Every per-edge container refers back to its graph through
/// std::shared_ptr<const Graph>.
class Graph {
 public:
  /// Throws InputError on self-loops, out-of-range nodes or duplicate edges.
  /// Pairs may be given in either orientation.
  Graph(int n, std::vector<Edge> edges);

  static std::shared_ptr<const Graph> make(int n, std::vector<Edge> edges) {
    return std::make_shared<const Graph>(n, std::move(edges));
  }
  static std::shared_ptr<const Graph> complete(int n);

  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }

  /// EdgeId of {a, b}, or -1 when absent. Either orientation.
  EdgeId find(int a, int b) const {
    return index_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b)];
  }
  bool has_edge(int a, int b) const { return find(a, b) >= 0; }

  /// Sorted neighbour list.
  std::span<const int> neighbors(int node) const { return adjacency_[static_cast<std::size_t>(node)]; }
  int degree(int node) const { return static_cast<int>(adjacency_[static_cast<std::size_t>(node)].size()); }

  /// Common neighbours of a and b, sorted.
  std::vector<int> common_neighbors(int a, int b) const;

  bool connected() const;

  /// Graph with the listed edge ids removed (same node set).
  std::shared_ptr<const Graph> without_edges(std::span<const EdgeId> removed) const;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<EdgeId> index_;
  std::vector<std::vector<int>> adjacency_;
};

using GraphPtr = std::shared_ptr<const Graph>;

/// Per-edge real values on a shared topology.
class EdgeValues {
 public:
  EdgeValues() = default;
  EdgeValues(GraphPtr graph, double fill);
  EdgeValues(GraphPtr graph, std::vector<double> values);

  const GraphPtr& graph() const { return graph_; }
  int num_nodes() const { return graph_->num_nodes(); }
  double operator[](EdgeId e) const { return values_[static_cast<std::size_t>(e)]; }
  double& operator[](EdgeId e) { return values_[static_cast<std::size_t>(e)]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Value on {a, b}; 0 when the edge is absent.
  double at(int a, int b) const {
    const EdgeId e = graph_->find(a, b);
    return e < 0 ? 0.0 : values_[static_cast<std::size_t>(e)];
  }

  /// Row-major symmetric n x n matrix, zero off the edge set.
  std::vector<double> dense() const;

 private:
  GraphPtr graph_;
  std::vector<double> values_;
};

/// Nonnegative symmetric edge weights W.
class WeightedGraph : public EdgeValues {
 public:
  WeightedGraph() = default;
  /// Throws InputError on a negative or non-finite weight.
  WeightedGraph(GraphPtr graph, std::vector<double> weights);
  /// All-ones weights (the adjacency matrix).
  static WeightedGraph adjacency(GraphPtr graph);

  /// d_i = sum_j w_ij
  std::vector<double> degrees() const;
};

/// Per-edge affinity in [0, 1].
class AffinityMatrix : public EdgeValues {
 public:
  AffinityMatrix() = default;
  /// Throws InputError if a value lies outside [0, 1] (beyond 1e-12 slack;
  /// values are clamped into the interval).
  AffinityMatrix(GraphPtr graph, std::vector<double> values);
};

/// Relative permutation measurements X~ on a graph.
///
/// Stores the block for the stored orientation (i < j) and its transpose so
/// that block(a, b) is O(1) for both orientations.
class BlockMeasurement {
 public:
  BlockMeasurement() = default;
  /// `blocks[e]` is X~_ij for edges()[e] = {i, j}, i < j.
  BlockMeasurement(GraphPtr graph, int m, std::vector<Permutation> blocks);

  const GraphPtr& graph() const { return graph_; }
  int num_nodes() const { return graph_->num_nodes(); }
  int block_size() const { return m_; }

  /// X~_ab for an edge {a, b}, in the requested orientation.
  const Permutation& block(int a, int b) const;
  const Permutation& block(EdgeId e) const { return forward_[static_cast<std::size_t>(e)]; }
  std::span<const Permutation> blocks() const { return forward_; }

  /// Replaces a block (stored orientation). Returns a new measurement.
  BlockMeasurement with_block(EdgeId e, Permutation p) const;

  friend bool operator==(const BlockMeasurement& a, const BlockMeasurement& b);

 private:
  GraphPtr graph_;
  int m_ = 0;
  std::vector<Permutation> forward_;
  std::vector<Permutation> backward_;
};

/// X*_ab = P_a P_b^T
inline Permutation relative(const Permutation& pa, const Permutation& pb) {
  return compose(pa, pb.transpose());
}

}  // namespace permsync
