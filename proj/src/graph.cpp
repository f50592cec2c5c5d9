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

#include "permsync/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "permsync/error.hpp"

namespace permsync {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 1) throw InputError("graph needs at least one node");
  for (Edge& e : edges) {
    if (e.i == e.j) throw InputError("self-loop on node " + std::to_string(e.i));
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) throw InputError("edge endpoint out of range");
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw InputError("duplicate edge");
  }
  edges_ = std::move(edges);
  index_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1);
  adjacency_.resize(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [i, j] = edges_[e];
    index_[static_cast<std::size_t>(i) * n + j] = static_cast<EdgeId>(e);
    index_[static_cast<std::size_t>(j) * n + i] = static_cast<EdgeId>(e);
    adjacency_[static_cast<std::size_t>(i)].push_back(j);
    adjacency_[static_cast<std::size_t>(j)].push_back(i);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

std::shared_ptr<const Graph> Graph::complete(int n) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  return make(n, std::move(edges));
}

std::vector<int> Graph::common_neighbors(int a, int b) const {
  std::vector<int> out;
  const auto na = neighbors(a);
  const auto nb = neighbors(b);
  std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(out));
  return out;
}

bool Graph::connected() const {
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : neighbors(u)) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++visited;
        frontier.push(v);
      }
    }
  }
  return visited == n_;
}

std::shared_ptr<const Graph> Graph::without_edges(std::span<const EdgeId> removed) const {
  std::vector<char> drop(edges_.size(), 0);
  for (EdgeId e : removed) drop[static_cast<std::size_t>(e)] = 1;
  std::vector<Edge> kept;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (!drop[e]) kept.push_back(edges_[e]);
  }
  return make(n_, std::move(kept));
}

EdgeValues::EdgeValues(GraphPtr graph, double fill)
    : graph_(std::move(graph)), values_(static_cast<std::size_t>(graph_->num_edges()), fill) {}

EdgeValues::EdgeValues(GraphPtr graph, std::vector<double> values)
    : graph_(std::move(graph)), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(graph_->num_edges())) {
    throw InputError("edge value count does not match edge count");
  }
}

std::vector<double> EdgeValues::dense() const {
  const std::size_t n = static_cast<std::size_t>(graph_->num_nodes());
  std::vector<double> out(n * n, 0.0);
  for (EdgeId e = 0; e < graph_->num_edges(); ++e) {
    const auto [i, j] = graph_->edge(e);
    out[static_cast<std::size_t>(i) * n + j] = values_[static_cast<std::size_t>(e)];
    out[static_cast<std::size_t>(j) * n + i] = values_[static_cast<std::size_t>(e)];
  }
  return out;
}

WeightedGraph::WeightedGraph(GraphPtr graph, std::vector<double> weights)
    : EdgeValues(std::move(graph), std::move(weights)) {
  for (double w : values()) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("edge weights must be finite and >= 0");
  }
}

WeightedGraph WeightedGraph::adjacency(GraphPtr graph) {
  const auto count = static_cast<std::size_t>(graph->num_edges());
  return WeightedGraph(std::move(graph), std::vector<double>(count, 1.0));
}

std::vector<double> WeightedGraph::degrees() const {
  std::vector<double> d(static_cast<std::size_t>(num_nodes()), 0.0);
  for (EdgeId e = 0; e < graph()->num_edges(); ++e) {
    const auto [i, j] = graph()->edge(e);
    d[static_cast<std::size_t>(i)] += (*this)[e];
    d[static_cast<std::size_t>(j)] += (*this)[e];
  }
  return d;
}

AffinityMatrix::AffinityMatrix(GraphPtr graph, std::vector<double> values)
    : EdgeValues(std::move(graph), std::move(values)) {
  for (double& a : this->values()) {
    if (!(a >= -1e-12 && a <= 1.0 + 1e-12)) throw InputError("affinity outside [0, 1]");
    a = std::clamp(a, 0.0, 1.0);
  }
}

BlockMeasurement::BlockMeasurement(GraphPtr graph, int m, std::vector<Permutation> blocks)
    : graph_(std::move(graph)), m_(m), forward_(std::move(blocks)) {
  if (forward_.size() != static_cast<std::size_t>(graph_->num_edges())) {
    throw InputError("block count does not match edge count");
  }
  backward_.reserve(forward_.size());
  for (const Permutation& p : forward_) {
    if (p.size() != m) throw InputError("block size mismatch");
    backward_.push_back(p.transpose());
  }
}

const Permutation& BlockMeasurement::block(int a, int b) const {
  const EdgeId e = graph_->find(a, b);
  if (e < 0) throw InputError("no measurement on edge " + std::to_string(a) + "-" + std::to_string(b));
  return a < b ? forward_[static_cast<std::size_t>(e)] : backward_[static_cast<std::size_t>(e)];
}

BlockMeasurement BlockMeasurement::with_block(EdgeId e, Permutation p) const {
  BlockMeasurement out = *this;
  if (p.size() != m_) throw InputError("block size mismatch");
  out.backward_[static_cast<std::size_t>(e)] = p.transpose();
  out.forward_[static_cast<std::size_t>(e)] = std::move(p);
  return out;
}

bool operator==(const BlockMeasurement& a, const BlockMeasurement& b) {
  return a.m_ == b.m_ && a.graph_->num_nodes() == b.graph_->num_nodes() &&
         std::equal(a.graph_->edges().begin(), a.graph_->edges().end(), b.graph_->edges().begin(),
                    b.graph_->edges().end()) &&
         a.forward_ == b.forward_;
}

}  // namespace permsync
