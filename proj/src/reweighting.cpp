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

// CEMP in matrix-power form and the IRGCL outer loop.

#include <algorithm>
#include <cmath>
#include <optional>

#include "permsync/error.hpp"
#include "permsync/gcw.hpp"
#include "permsync/solvers.hpp"
#include "solver_internal.hpp"

namespace permsync {
namespace {

// <(S^l ./ W^l)[i, j], X~_ij> / m per edge. Edges without a weighted l-path
// take fallback[e]; for l = 2 the triangle table route is used.
std::vector<double> path_affinity(const BlockMeasurement& meas, const TriangleTable* triangles,
                                  std::vector<double> weights, int power, std::span<const double> fallback) {
  const GcwOperator s(meas, std::move(weights));
  if (power == 2 && triangles != nullptr) return cycle_affinity(*triangles, s, fallback).values;

  const double m = meas.block_size();
  // Falling back to f X~_ij makes the affinity exactly f.
  const RatioTable ratio = squared_gcw_ratio(s, power, [&](EdgeId e) {
    return SquareBlock::from_permutation(meas.block(e), fallback[static_cast<std::size_t>(e)]);
  });
  std::vector<double> out(ratio.blocks.size());
  for (std::size_t e = 0; e < out.size(); ++e) {
    out[e] = std::clamp(ratio.blocks[e].inner(meas.block(static_cast<EdgeId>(e))) / m, 0.0, 1.0);
  }
  return out;
}

// exp(scale * a) on every edge. With scale <= 40 and a in [0, 1] the weights
// stay below e^40, and path products below e^(40 l), far from overflow for
// the cycle lengths supported here.
std::vector<double> exp_weights(std::span<const double> a, double scale) {
  std::vector<double> w(a.size());
  for (std::size_t e = 0; e < a.size(); ++e) w[e] = std::exp(scale * a[e]);
  return w;
}

}  // namespace

AffinityMatrix cemp_init(const BlockMeasurement& meas, const Schedule& schedule, int power, double fallback) {
  schedule.validate();
  if (power < 2) throw InputError("cemp: cycle power must be >= 2");
  if (!(fallback >= 0.0 && fallback <= 1.0)) throw InputError("cemp: fallback must lie in [0, 1]");
  const auto num_edges = static_cast<std::size_t>(meas.graph()->num_edges());
  std::optional<TriangleTable> triangles;
  if (power == 2) triangles.emplace(meas);
  const std::vector<double> fallbacks(num_edges, fallback);

  std::vector<double> w(num_edges, 1.0);
  std::vector<double> a;
  for (int t = 0; t <= schedule.t0; ++t) {
    a = path_affinity(meas, triangles ? &*triangles : nullptr, std::move(w), power, fallbacks);
    w = exp_weights(a, schedule.beta(t));
  }
  return AffinityMatrix(meas.graph(), std::move(a));
}

namespace {

SolverReport irgcl_run(const BlockMeasurement& meas, const Schedule& schedule, WlsVariant variant,
                       bool init_only) {
  const detail::Stopwatch clock;
  schedule.validate();
  const AffinityMatrix a0 = cemp_init(meas, schedule);
  std::vector<double> w(a0.values().begin(), a0.values().end());
  std::vector<Permutation> p = wls_spectral_step(meas, w);

  SolverReport report;
  report.trace.push_back({hash_values(w), static_cast<int>(p.size())});
  if (init_only) {
    report.estimate = std::move(p);
    report.iterations = 1;
    report.converged = true;
    report.wall_ms = clock.elapsed_ms();
    return report;
  }

  const TriangleTable triangles(meas);
  const double m = meas.block_size();
  for (int t = 1; t <= schedule.t_max; ++t) {
    const std::vector<int> agree = detail::edge_agreements(meas, p);
    std::vector<double> a1(agree.size());
    for (std::size_t e = 0; e < a1.size(); ++e) a1[e] = agree[e] / m;
    const std::vector<double> a2 = path_affinity(meas, &triangles, exp_weights(a1, schedule.alpha(t)), 2, a1);
    const double lambda = schedule.lambda(t);
    for (std::size_t e = 0; e < w.size(); ++e) w[e] = (1.0 - lambda) * a1[e] + lambda * a2[e];

    std::vector<Permutation> next =
        variant == WlsVariant::kSpectral ? wls_spectral_step(meas, w) : wls_power_step(meas, w, p);
    const int changed = count_changed(p, next);
    report.trace.push_back({hash_values(w), changed});
    report.iterations = t;
    p = std::move(next);
    if (changed == 0) {
      report.converged = true;
      break;
    }
  }
  report.estimate = std::move(p);
  report.wall_ms = clock.elapsed_ms();
  return report;
}

}  // namespace

SolverReport irgcl_solve(const BlockMeasurement& meas, const Schedule& schedule, WlsVariant variant) {
  return irgcl_run(meas, schedule, variant, false);
}

SolverReport irgcl_init_solve(const BlockMeasurement& meas, const Schedule& schedule) {
  return irgcl_run(meas, schedule, WlsVariant::kSpectral, true);
}

}  // namespace permsync
