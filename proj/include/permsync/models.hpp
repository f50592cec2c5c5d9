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

// Synthetic permutation-synchronization problems.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permsync/graph.hpp"
#include "permsync/permutation.hpp"
#include "permsync/rng.hpp"

namespace permsync {

/// Measurements plus, for synthetic data, the ground truth.
struct ProblemInstance {
  BlockMeasurement meas;
  /// P*_i, when known.
  std::optional<std::vector<Permutation>> truth;
  /// Per-edge flag (indexed by EdgeId): 1 if the edge is in E_b.
  std::optional<std::vector<char>> bad;

  const GraphPtr& graph() const { return meas.graph(); }
  int num_nodes() const { return meas.num_nodes(); }
  int block_size() const { return meas.block_size(); }
  WeightedGraph adjacency() const { return WeightedGraph::adjacency(meas.graph()); }

  /// Edge ids with bad[e] set. Throws InputError when E_b is unknown.
  std::vector<EdgeId> bad_edges() const;

  /// Checks sizes, that E_b flags match edges, and that every good edge
  /// carries exactly P*_i P*_j^T. Throws InputError otherwise.
  void validate() const;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

enum class ModelKind { kUniform, kSuperspreader, kLbc, kLac };

/// Sampler for corrupted superspreader blocks X~_{i0 j}.
enum class CorruptionSampler {
  kHaar,     // X~ ~ Haar
  kLac,      // X~ = Q X*_{i0 j}, Q a 3-cycle on three random columns
  kMixture,  // with prob. mix_prob X~ = P_crpt P*_j^T, otherwise Haar
};

std::string_view model_name(ModelKind kind);
/// Throws InputError on an unknown tag.
ModelKind parse_model(std::string_view tag);
std::string_view sampler_name(CorruptionSampler s);
CorruptionSampler parse_sampler(std::string_view tag);

struct ModelConfig {
  ModelKind model = ModelKind::kUniform;
  int n = 100;
  int m = 10;
  double p = 1.0;  // edge probability of the Erdos-Renyi graph

  double q = 0.0;  // uniform: corruption probability

  double epsilon = 1.0;  // superspreader: an edge at i0 stays good with prob. epsilon
  int i0 = 0;
  CorruptionSampler sampler = CorruptionSampler::kHaar;
  double mix_prob = 0.0;
  std::optional<Permutation> p_crpt;

  int nc = 0;  // lbc/lac: corrupted nodes
  int mc = 0;  // lbc/lac: corrupted incident edges per corrupted node

  /// Throws InputError if a parameter is out of range for the model.
  void validate() const;
};

/// Uniform over all m! permutations (Fisher-Yates).
Permutation sample_haar_permutation(SeededRng& rng, int m);

/// One of the two 3-cycles on three distinct uniformly chosen columns of I_m.
Permutation sample_three_cycle(SeededRng& rng, int m);

/// G(n, p) with unit weights. With require_connected the whole graph is
/// redrawn until connected, at most 1000 times (GenerationError after).
WeightedGraph generate_er_graph(SeededRng& rng, int n, double p, bool require_connected);

/// One corrupted superspreader block X~_{i0 j} drawn from cfg.sampler, given
/// the true absolute permutations of i0 and j.
Permutation sample_corrupted_block(const ModelConfig& cfg, SeededRng& rng, const Permutation& p_i0,
                                   const Permutation& p_j);

ProblemInstance generate_uniform(const ModelConfig& cfg, SeededRng& rng);
ProblemInstance generate_superspreader(const ModelConfig& cfg, SeededRng& rng);
ProblemInstance generate_lbc(const ModelConfig& cfg, SeededRng& rng);
ProblemInstance generate_lac(const ModelConfig& cfg, SeededRng& rng);

/// Dispatches on cfg.model.
ProblemInstance generate(const ModelConfig& cfg, SeededRng& rng);

struct FilteredInstance {
  ProblemInstance instance;
  std::vector<int> kept;  // kept[new index] = original node index
};

/// Removes every node whose incident edges are all bad and returns the
/// induced subproblem. `bad` defaults to the instance's E_b. Throws
/// InputError if no bad-edge set is available and GenerationError if the
/// remaining graph is empty or disconnected.
FilteredInstance well_posedness_filter(const ProblemInstance& inst,
                                       const std::vector<char>* bad = nullptr);

}  // namespace permsync
