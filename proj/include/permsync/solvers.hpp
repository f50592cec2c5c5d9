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

// Permutation synchronization solvers.
//
// Every solver works on the measurement alone; ground truth, when present,
// is only used by the analysis module. Solvers are pure functions of their
// inputs, so independent solves can run on different threads.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "permsync/graph.hpp"
#include "permsync/permutation.hpp"

namespace permsync {

/// Parameter sequences for CEMP and the reweighting loop.
struct Schedule {
  int t0 = 5;
  int t_max = 100;
  std::vector<double> betas;    // beta_t for t = 0..t0
  std::vector<double> alphas;   // alpha_t for t = 1..t_max, stored at t - 1
  std::vector<double> lambdas;  // lambda_t for t = 1..t_max, stored at t - 1

  /// beta_t = min(2^t, 40), alpha_t = min(1.2^(t-1), 40), lambda_t = t/(t+1).
  static Schedule defaults(int t0 = 5, int t_max = 100);

  double beta(int t) const { return betas.at(static_cast<std::size_t>(t)); }
  double alpha(int t) const { return alphas.at(static_cast<std::size_t>(t - 1)); }
  double lambda(int t) const { return lambdas.at(static_cast<std::size_t>(t - 1)); }

  /// Lengths must match t0/t_max; both temperature sequences must be
  /// nondecreasing and finite, and lambda must lie in [0, 1]. Throws
  /// InputError otherwise.
  void validate() const;
};

struct IterationRecord {
  std::uint64_t affinity_hash = 0;  // hash of the edge weights used for the step
  int changed = 0;                  // nodes whose estimate changed
  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct SolverReport {
  std::vector<Permutation> estimate;
  int iterations = 0;
  bool converged = false;  // the last update left every estimate unchanged
  std::vector<IterationRecord> trace;
  double wall_ms = 0.0;
};

/// FNV-1a over the bit patterns of the values.
std::uint64_t hash_values(std::span<const double> values);

/// Nodes whose estimates differ.
int count_changed(const std::vector<Permutation>& a, const std::vector<Permutation>& b);

/// Right-multiplies every estimate by q (a global gauge change).
SolverReport apply_gauge(SolverReport report, const Permutation& q);

/// Node with the largest unweighted degree (smallest index on ties).
int spectral_anchor(const Graph& g);

/// Top-m eigenvectors of D^-1/2 S D^-1/2 with S = (W kron 1_m) .* X~,
/// rescaled by D^-1/2 and rounded blockwise as P_i = Proj(V_i V_r^T) with r
/// the spectral anchor. Throws SolverError on a zero weighted degree.
std::vector<Permutation> wls_spectral_step(const BlockMeasurement& meas, const WeightedGraph& w);
std::vector<Permutation> wls_spectral_step(const BlockMeasurement& meas, std::span<const double> w);

/// P_i <- Proj(sum_j w_ij X~_ij P_j); nodes with no incident weight keep P_i.
std::vector<Permutation> wls_power_step(const BlockMeasurement& meas, const WeightedGraph& w,
                                        const std::vector<Permutation>& current);
std::vector<Permutation> wls_power_step(const BlockMeasurement& meas, std::span<const double> w,
                                        const std::vector<Permutation>& current);

/// Spectral method; `weights` defaults to the adjacency matrix.
SolverReport spectral_solve(const BlockMeasurement& meas, const WeightedGraph* weights = nullptr);

/// Projected power method with the self term X~_ii = I, started from the
/// spectral estimate unless `init` is given.
SolverReport ppm_solve(const BlockMeasurement& meas, const std::vector<Permutation>* init = nullptr,
                       int t_max = 100);

/// IRLS with w_ij = 1 / max(||P_i P_j^T - X~_ij||_F, delta), spectral WLS.
SolverReport irls_l1_solve(const BlockMeasurement& meas, double delta = 1e-8, int t_max = 100);

enum class WlsVariant { kSpectral, kPower };

/// IRLS with Cauchy weights w = 1 / (1 + (r / c)^2). Without `scale`, c is
/// the median of the nonzero residuals of the current iterate (all weights
/// are 1 when every residual is 0).
SolverReport irls_cauchy_solve(const BlockMeasurement& meas, WlsVariant variant,
                               std::optional<double> scale = std::nullopt, int t_max = 100);

/// CEMP in matrix-power form with cycle power l >= 2 (cycles of length
/// l + 1). Runs t = 0..schedule.t0 and returns A_init,(t0). Edges without a
/// weighted l-path get `fallback`.
AffinityMatrix cemp_init(const BlockMeasurement& meas, const Schedule& schedule, int power = 2,
                         double fallback = 0.5);

/// Iteratively reweighted graph connection Laplacian.
SolverReport irgcl_solve(const BlockMeasurement& meas, const Schedule& schedule, WlsVariant variant);

/// P_(1) of the reweighting loop: CEMP affinities and one spectral WLS solve.
SolverReport irgcl_init_solve(const BlockMeasurement& meas, const Schedule& schedule);

}  // namespace permsync
