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

#include "permsync/models.hpp"

#include <numeric>
#include <string>

#include "permsync/error.hpp"

namespace permsync {

std::vector<EdgeId> ProblemInstance::bad_edges() const {
  if (!bad) throw InputError("instance has no bad-edge set");
  std::vector<EdgeId> out;
  for (std::size_t e = 0; e < bad->size(); ++e) {
    if ((*bad)[e]) out.push_back(static_cast<EdgeId>(e));
  }
  return out;
}

void ProblemInstance::validate() const {
  const Graph& g = *graph();
  if (bad && bad->size() != static_cast<std::size_t>(g.num_edges())) {
    throw InputError("bad-edge flags do not match edge count");
  }
  if (!truth) return;
  if (truth->size() != static_cast<std::size_t>(g.num_nodes())) {
    throw InputError("truth has wrong node count");
  }
  for (const Permutation& p : *truth) {
    if (p.size() != block_size()) throw InputError("truth block size mismatch");
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (bad && (*bad)[static_cast<std::size_t>(e)]) continue;
    const auto [i, j] = g.edge(e);
    if (meas.block(e) != relative((*truth)[static_cast<std::size_t>(i)], (*truth)[static_cast<std::size_t>(j)])) {
      throw InputError("good edge " + std::to_string(i) + "-" + std::to_string(j) +
                       " disagrees with the truth");
    }
  }
}

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kUniform:
      return "uniform";
    case ModelKind::kSuperspreader:
      return "superspreader";
    case ModelKind::kLbc:
      return "lbc";
    case ModelKind::kLac:
      return "lac";
  }
  return "unknown";
}

ModelKind parse_model(std::string_view tag) {
  for (ModelKind k : {ModelKind::kUniform, ModelKind::kSuperspreader, ModelKind::kLbc, ModelKind::kLac}) {
    if (model_name(k) == tag) return k;
  }
  throw InputError("unknown model '" + std::string(tag) + "'");
}

std::string_view sampler_name(CorruptionSampler s) {
  switch (s) {
    case CorruptionSampler::kHaar:
      return "haar";
    case CorruptionSampler::kLac:
      return "lac";
    case CorruptionSampler::kMixture:
      return "mixture";
  }
  return "unknown";
}

CorruptionSampler parse_sampler(std::string_view tag) {
  for (CorruptionSampler s : {CorruptionSampler::kHaar, CorruptionSampler::kLac, CorruptionSampler::kMixture}) {
    if (sampler_name(s) == tag) return s;
  }
  throw InputError("unknown corruption sampler '" + std::string(tag) + "'");
}

void ModelConfig::validate() const {
  if (n < 2) throw InputError("n must be at least 2");
  if (m < 1) throw InputError("m must be at least 1");
  if (!(p > 0.0 && p <= 1.0)) throw InputError("p must lie in (0, 1]");
  switch (model) {
    case ModelKind::kUniform:
      if (!(q >= 0.0 && q <= 1.0)) throw InputError("q must lie in [0, 1]");
      break;
    case ModelKind::kSuperspreader:
      if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InputError("epsilon must lie in (0, 1]");
      if (i0 < 0 || i0 >= n) throw InputError("i0 out of range");
      if (sampler == CorruptionSampler::kLac && m < 3) throw InputError("lac sampler needs m >= 3");
      if (sampler == CorruptionSampler::kMixture) {
        if (!(mix_prob >= 0.0 && mix_prob <= 1.0)) throw InputError("mix_prob must lie in [0, 1]");
        if (!p_crpt || p_crpt->size() != m) throw InputError("mixture sampler needs p_crpt of size m");
      }
      break;
    case ModelKind::kLbc:
    case ModelKind::kLac:
      if (nc < 0 || nc > n) throw InputError("nc must lie in [0, n]");
      if (mc < 0 || mc > n - 1) throw InputError("mc must lie in [0, n-1]");
      if (model == ModelKind::kLac && m < 3) throw InputError("lac model needs m >= 3");
      break;
  }
}

Permutation sample_haar_permutation(SeededRng& rng, int m) {
  if (m < 1) throw InputError("permutation size must be positive");
  std::vector<std::int32_t> map(static_cast<std::size_t>(m));
  std::iota(map.begin(), map.end(), 0);
  for (int k = m - 1; k > 0; --k) {
    const auto r = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(k) + 1));
    std::swap(map[static_cast<std::size_t>(k)], map[r]);
  }
  return Permutation(std::move(map));
}

namespace {

// First `count` entries of a uniformly shuffled copy of `pool`.
template <typename T>
std::vector<T> sample_without_replacement(SeededRng& rng, std::vector<T> pool, std::size_t count) {
  for (std::size_t k = 0; k < count; ++k) {
    const auto r = k + static_cast<std::size_t>(rng.below(pool.size() - k));
    std::swap(pool[k], pool[r]);
  }
  pool.resize(count);
  return pool;
}

struct Base {
  GraphPtr graph;
  std::vector<Permutation> truth;
  std::vector<Permutation> blocks;  // X* in stored orientation
};

Base draw_base(const ModelConfig& cfg, SeededRng& rng) {
  SeededRng graph_rng = rng.split(1);
  SeededRng truth_rng = rng.split(2);
  Base b;
  b.graph = generate_er_graph(graph_rng, cfg.n, cfg.p, true).graph();
  b.truth.reserve(static_cast<std::size_t>(cfg.n));
  for (int i = 0; i < cfg.n; ++i) b.truth.push_back(sample_haar_permutation(truth_rng, cfg.m));
  for (const Edge& e : b.graph->edges()) {
    b.blocks.push_back(relative(b.truth[static_cast<std::size_t>(e.i)], b.truth[static_cast<std::size_t>(e.j)]));
  }
  return b;
}

// Stores X~_ab (a, b in either order) for edge e.
void store(Base& b, EdgeId e, int a, Permutation x_ab) {
  b.blocks[static_cast<std::size_t>(e)] = a == b.graph->edge(e).i ? std::move(x_ab) : x_ab.transpose();
}

// E_b is the set of edges whose block actually differs from the truth.
ProblemInstance finish(Base b) {
  const Graph& g = *b.graph;
  std::vector<char> bad(static_cast<std::size_t>(g.num_edges()), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    bad[static_cast<std::size_t>(e)] =
        b.blocks[static_cast<std::size_t>(e)] != relative(b.truth[static_cast<std::size_t>(i)], b.truth[static_cast<std::size_t>(j)]);
  }
  const int m = b.truth.front().size();
  return {BlockMeasurement(b.graph, m, std::move(b.blocks)), std::move(b.truth), std::move(bad)};
}

void require(const ModelConfig& cfg, ModelKind kind) {
  if (cfg.model != kind) throw InputError("model tag does not match generator");
  cfg.validate();
}

struct LocalSelection {
  std::vector<EdgeId> edges;  // selected edges, ascending
  std::vector<int> owner;     // owner[k]: node that first selected edges[k]
};

// n_c corrupted nodes without replacement among the nodes of degree >= m_c,
// then m_c incident edges per node without replacement; the union is kept.
LocalSelection select_local_edges(const ModelConfig& cfg, const Graph& g, SeededRng& rng) {
  std::vector<int> eligible;
  for (int i = 0; i < g.num_nodes(); ++i) {
    if (g.degree(i) >= cfg.mc) eligible.push_back(i);
  }
  if (static_cast<int>(eligible.size()) < cfg.nc) {
    throw GenerationError("only " + std::to_string(eligible.size()) + " nodes have degree >= mc = " +
                          std::to_string(cfg.mc) + ", need nc = " + std::to_string(cfg.nc));
  }
  const auto nodes = sample_without_replacement(rng, eligible, static_cast<std::size_t>(cfg.nc));
  std::vector<int> owner_of(static_cast<std::size_t>(g.num_edges()), -1);
  for (int i : nodes) {
    const auto nbrs = g.neighbors(i);
    const auto picked = sample_without_replacement(rng, std::vector<int>(nbrs.begin(), nbrs.end()),
                                                   static_cast<std::size_t>(cfg.mc));
    for (int j : picked) {
      int& owner = owner_of[static_cast<std::size_t>(g.find(i, j))];
      if (owner < 0) owner = i;
    }
  }
  LocalSelection sel;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (owner_of[static_cast<std::size_t>(e)] >= 0) {
      sel.edges.push_back(e);
      sel.owner.push_back(owner_of[static_cast<std::size_t>(e)]);
    }
  }
  return sel;
}

}  // namespace

Permutation sample_three_cycle(SeededRng& rng, int m) {
  if (m < 3) throw InputError("three-cycle needs m >= 3");
  std::vector<int> cols(static_cast<std::size_t>(m));
  std::iota(cols.begin(), cols.end(), 0);
  const auto c = sample_without_replacement(rng, std::move(cols), 3);
  std::vector<std::int32_t> map(static_cast<std::size_t>(m));
  std::iota(map.begin(), map.end(), 0);
  // c0 -> c1 -> c2 -> c0, or the reverse cycle.
  const bool forward = rng.below(2) == 0;
  map[static_cast<std::size_t>(c[0])] = forward ? c[1] : c[2];
  map[static_cast<std::size_t>(c[1])] = forward ? c[2] : c[0];
  map[static_cast<std::size_t>(c[2])] = forward ? c[0] : c[1];
  return Permutation(std::move(map));
}

WeightedGraph generate_er_graph(SeededRng& rng, int n, double p, bool require_connected) {
  if (n < 2) throw InputError("graph needs at least two nodes");
  if (!(p > 0.0 && p <= 1.0)) throw InputError("p must lie in (0, 1]");
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.bernoulli(p)) edges.push_back({i, j});
      }
    }
    auto g = Graph::make(n, std::move(edges));
    if (!require_connected || g->connected()) return WeightedGraph::adjacency(std::move(g));
  }
  throw GenerationError("no connected G(" + std::to_string(n) + ", " + std::to_string(p) +
                        ") graph in 1000 attempts");
}

ProblemInstance generate_uniform(const ModelConfig& cfg, SeededRng& rng) {
  require(cfg, ModelKind::kUniform);
  Base b = draw_base(cfg, rng);
  SeededRng crpt = rng.split(3);
  for (EdgeId e = 0; e < b.graph->num_edges(); ++e) {
    if (crpt.bernoulli(cfg.q)) b.blocks[static_cast<std::size_t>(e)] = sample_haar_permutation(crpt, cfg.m);
  }
  return finish(std::move(b));
}

Permutation sample_corrupted_block(const ModelConfig& cfg, SeededRng& rng, const Permutation& p_i0,
                                   const Permutation& p_j) {
  switch (cfg.sampler) {
    case CorruptionSampler::kHaar:
      return sample_haar_permutation(rng, cfg.m);
    case CorruptionSampler::kLac:
      // Three columns displaced relative to the truth: X~ = Q X*_{i0 j}.
      return compose(sample_three_cycle(rng, cfg.m), relative(p_i0, p_j));
    case CorruptionSampler::kMixture:
      if (!cfg.p_crpt) throw InputError("mixture sampler needs p_crpt");
      return rng.bernoulli(cfg.mix_prob) ? compose(*cfg.p_crpt, p_j.transpose())
                                         : sample_haar_permutation(rng, cfg.m);
  }
  throw InputError("unknown corruption sampler");
}

ProblemInstance generate_superspreader(const ModelConfig& cfg, SeededRng& rng) {
  require(cfg, ModelKind::kSuperspreader);
  Base b = draw_base(cfg, rng);
  SeededRng crpt = rng.split(3);
  const Graph& g = *b.graph;
  const int i0 = cfg.i0;
  if (g.degree(i0) == 0) throw GenerationError("superspreader node is isolated");
  const Permutation& p_i0 = b.truth[static_cast<std::size_t>(i0)];
  for (int j : g.neighbors(i0)) {
    if (crpt.bernoulli(cfg.epsilon)) continue;
    Permutation x = sample_corrupted_block(cfg, crpt, p_i0, b.truth[static_cast<std::size_t>(j)]);
    store(b, g.find(i0, j), i0, std::move(x));
  }
  return finish(std::move(b));
}

ProblemInstance generate_lbc(const ModelConfig& cfg, SeededRng& rng) {
  require(cfg, ModelKind::kLbc);
  Base b = draw_base(cfg, rng);
  SeededRng crpt = rng.split(3);
  const Graph& g = *b.graph;
  const LocalSelection sel = select_local_edges(cfg, g, crpt);
  std::vector<Permutation> pc;
  pc.reserve(static_cast<std::size_t>(cfg.n));
  for (int i = 0; i < cfg.n; ++i) pc.push_back(sample_haar_permutation(crpt, cfg.m));
  for (EdgeId e : sel.edges) {
    const auto [i, j] = g.edge(e);
    Permutation biased = relative(pc[static_cast<std::size_t>(i)], pc[static_cast<std::size_t>(j)]);
    if (biased.agreement(b.blocks[static_cast<std::size_t>(e)]) <= 1) {
      b.blocks[static_cast<std::size_t>(e)] = std::move(biased);
    } else {
      b.blocks[static_cast<std::size_t>(e)] = sample_haar_permutation(crpt, cfg.m);
    }
  }
  return finish(std::move(b));
}

ProblemInstance generate_lac(const ModelConfig& cfg, SeededRng& rng) {
  require(cfg, ModelKind::kLac);
  Base b = draw_base(cfg, rng);
  SeededRng crpt = rng.split(3);
  const Graph& g = *b.graph;
  const LocalSelection sel = select_local_edges(cfg, g, crpt);
  for (std::size_t k = 0; k < sel.edges.size(); ++k) {
    const EdgeId e = sel.edges[k];
    const int i = sel.owner[k];
    const int j = g.edge(e).i == i ? g.edge(e).j : g.edge(e).i;
    // X~_ij = Q P*_j^T, which pulls the estimate of P_i towards Q.
    Permutation x = compose(sample_three_cycle(crpt, cfg.m), b.truth[static_cast<std::size_t>(j)].transpose());
    store(b, e, i, std::move(x));
  }
  return finish(std::move(b));
}

ProblemInstance generate(const ModelConfig& cfg, SeededRng& rng) {
  switch (cfg.model) {
    case ModelKind::kUniform:
      return generate_uniform(cfg, rng);
    case ModelKind::kSuperspreader:
      return generate_superspreader(cfg, rng);
    case ModelKind::kLbc:
      return generate_lbc(cfg, rng);
    case ModelKind::kLac:
      return generate_lac(cfg, rng);
  }
  throw InputError("unknown model");
}

FilteredInstance well_posedness_filter(const ProblemInstance& inst, const std::vector<char>* bad) {
  if (bad == nullptr) {
    if (!inst.bad) throw InputError("well-posedness filter needs a bad-edge set");
    bad = &*inst.bad;
  }
  const Graph& g = *inst.graph();
  if (bad->size() != static_cast<std::size_t>(g.num_edges())) {
    throw InputError("bad-edge flags do not match edge count");
  }
  std::vector<int> new_index(static_cast<std::size_t>(g.num_nodes()), -1);
  std::vector<int> kept;
  for (int i = 0; i < g.num_nodes(); ++i) {
    bool has_good = false;
    for (int j : g.neighbors(i)) has_good = has_good || !(*bad)[static_cast<std::size_t>(g.find(i, j))];
    if (has_good) {
      new_index[static_cast<std::size_t>(i)] = static_cast<int>(kept.size());
      kept.push_back(i);
    }
  }
  if (kept.size() < 2) throw GenerationError("filtered problem has fewer than two nodes");

  std::vector<Edge> edges;
  std::vector<EdgeId> source;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    const int a = new_index[static_cast<std::size_t>(i)];
    const int b = new_index[static_cast<std::size_t>(j)];
    if (a >= 0 && b >= 0) {
      edges.push_back({a, b});
      source.push_back(e);
    }
  }
  // The node map is increasing, so the induced edges stay in sorted order.
  auto sub = Graph::make(static_cast<int>(kept.size()), std::move(edges));
  if (!sub->connected()) throw GenerationError("filtered graph is disconnected");

  std::vector<Permutation> blocks;
  std::vector<char> sub_bad;
  for (EdgeId e : source) {
    blocks.push_back(inst.meas.block(e));
    sub_bad.push_back((*bad)[static_cast<std::size_t>(e)]);
  }
  FilteredInstance out{{BlockMeasurement(sub, inst.block_size(), std::move(blocks)), std::nullopt, std::move(sub_bad)},
                       kept};
  if (inst.truth) {
    std::vector<Permutation> truth;
    for (int i : kept) truth.push_back((*inst.truth)[static_cast<std::size_t>(i)]);
    out.instance.truth = std::move(truth);
  }
  return out;
}

}  // namespace permsync
