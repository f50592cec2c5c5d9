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

// Error metrics and empirical checks of the guarantees behind the solvers.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "permsync/graph.hpp"
#include "permsync/models.hpp"
#include "permsync/permutation.hpp"
#include "permsync/solvers.hpp"

namespace permsync {

enum class EdgeSet { kBadEdges, kAllPairs };

struct ErrorReport {
  /// sum ||X^_ij - X*_ij||_F^2 / sum ||X*_ij||_F^2 over the compared pairs.
  double error = 0.0;
  EdgeSet edge_set = EdgeSet::kAllPairs;
  std::size_t pairs = 0;
  /// histogram[k]: compared pairs whose blocks disagree in exactly k rows
  /// (squared residual 2k).
  std::vector<std::size_t> histogram;
};

/// Error over explicit unordered pairs. Throws InputError on an empty set or
/// size mismatch.
ErrorReport relative_error(const std::vector<Permutation>& estimate, const std::vector<Permutation>& truth,
                           std::span<const std::pair<int, int>> pairs, EdgeSet tag);

/// Error over all pairs i != j.
ErrorReport relative_error_all_pairs(const std::vector<Permutation>& estimate,
                                     const std::vector<Permutation>& truth);

/// Error over E_b of the instance; falls back to all pairs when E_b is
/// empty. Throws InputError without truth or E_b.
ErrorReport relative_error_bad_edges(const ProblemInstance& inst, const std::vector<Permutation>& estimate);

/// The benchmark metric for a model: all pairs for the uniform model, E_b
/// for the local and superspreader models.
ErrorReport model_error(ModelKind model, const ProblemInstance& inst, const std::vector<Permutation>& estimate);

/// A*(i, j) = <X~_ij, X*_ij> / m. Throws InputError without truth.
AffinityMatrix ground_truth_affinity(const ProblemInstance& inst);

/// CEMP as explicit message passing over all walks i, k_1, ..., k_{l-1}, j
/// of length l through each edge ij (cycles of length l + 1 closed by ji).
///
/// s_(0)(ij) is the mean cycle inconsistency
/// d_L = ||X~_{i k1} ... X~_{k_{l-1} j} X~_ji - I||_F^2 / (2m); later steps
/// average d_L with cycle weights prod_{ab in L \ ij} exp(-beta_t s_(t)(ab)).
/// Returns 1 - s_(t0). Edges without a walk keep s = 1 - fallback. Throws
/// InputError once more than max_walks walks would be enumerated.
AffinityMatrix cemp_message_passing_oracle(const BlockMeasurement& meas, const Schedule& schedule, int power,
                                           double fallback = 0.5, std::size_t max_walks = 1'000'000);

enum class Verdict { kPass, kFail, kVacuous };
std::string_view verdict_name(Verdict v);

struct CycleRatioCheck {
  bool applicable = false;  // W^l(i, j) > 0 on every edge, with W the indicator of E_g
  double max_deviation = 0.0;
  int edges_checked = 0;
  Verdict verdict = Verdict::kVacuous;
};

/// With W = indicator(E_g), checks S^l ./ W^l == X* on every edge to 1e-12.
CycleRatioCheck verify_cycle_ratio(const ProblemInstance& inst, int power);

struct CorruptionBoundCheck {
  double mu = 0.0;
  double mu_bb = 0.0;
  double mu_bg = 0.0;
  double mu_gb = 0.0;
  // Monte Carlo estimates (and standard errors) of both sides of the
  // corruption condition, in squared Frobenius units.
  double lhs = 0.0, lhs_stderr = 0.0;
  double rhs = 0.0, rhs_stderr = 0.0;
  bool condition_holds = false;
  double bound = 0.0;
  std::vector<double> achieved;  // ||A_init,(1) - A*||_inf per trial, over edges
  int within_bound = 0;
  Verdict verdict = Verdict::kVacuous;
};

/// (2 - eps) / (2 - eps + eps exp(beta0 mu eps / 2)).
double superspreader_affinity_bound(double epsilon, double mu, double beta0);

/// Monte Carlo check of the one-iteration CEMP bound on the superspreader
/// model. Passes when at least 90% of the trials are within the bound;
/// vacuous when the corruption condition fails empirically.
CorruptionBoundCheck verify_superspreader_bound(const ModelConfig& cfg, double beta0, int trials,
                                                std::uint64_t seed, int mc_samples = 100'000);

struct PpmFailureCheck {
  int trials = 0;
  int qualifying = 0;      // trials where the hypotheses held
  int returned_crpt = 0;   // qualifying trials where the update returned P_crpt
  double condition_value = 0.0;  // 2 eps sqrt(2m) + (1 - 2 eps) eps0
  std::vector<double> q_distance;  // ||Q - P_crpt||_F per trial
  Verdict verdict = Verdict::kVacuous;
};

/// Superspreader instances with the mixture sampler; one PPM update at i0
/// with every other node fixed at its truth. Passes when every qualifying
/// trial returns P_crpt.
PpmFailureCheck verify_ppm_failure(int n, int m, double epsilon, double mix_prob, int trials, std::uint64_t seed,
                                   double eps0 = 0.5);

/// Single PPM update at node i0 with all other nodes at `current`:
/// Proj(current[i0] + sum_j X~_{i0 j} current[j]).
Permutation ppm_node_update(const BlockMeasurement& meas, const std::vector<Permutation>& current, int node);

struct CycleStats {
  std::vector<int> common;  // |N(ij)|
  std::vector<int> good;    // |N_g(ij)|: k with ik and kj good
  std::vector<int> bad;     // |N(ij)| - |N_g(ij)|
};

/// Per-edge triangle counts. Throws InputError without E_b.
CycleStats cycle_stats(const ProblemInstance& inst);

struct SuiteResult {
  Verdict verdict = Verdict::kVacuous;
  std::vector<std::string> lines;  // human-readable report
};

/// Runs a named verification suite with its default parameters: hungarian,
/// prop31, prop42, thm52, ppm-failure or invariants. Throws InputError on an
/// unknown name.
SuiteResult run_suite(std::string_view name, std::uint64_t seed);

/// Names accepted by run_suite.
std::span<const std::string_view> suite_names();

/// argmax_P <P, M> by enumerating all m! permutations; the lexicographically
/// smallest maximizer. Intended for m <= 8.
std::pair<Permutation, double> brute_force_assignment(const SquareBlock& scores);

}  // namespace permsync
