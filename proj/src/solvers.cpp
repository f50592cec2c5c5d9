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

#include "permsync/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "permsync/assignment.hpp"
#include "permsync/eigensolver.hpp"
#include "permsync/error.hpp"
#include "permsync/gcw.hpp"
#include "permsync/simd/kernels.hpp"
#include "solver_internal.hpp"

namespace permsync {

namespace detail {

std::vector<int> edge_agreements(const BlockMeasurement& meas, const std::vector<Permutation>& p) {
  const Graph& g = *meas.graph();
  const auto m = static_cast<std::size_t>(meas.block_size());
  std::vector<int> out(static_cast<std::size_t>(g.num_edges()));
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    out[static_cast<std::size_t>(e)] = simd::count_composed_matches(
        meas.block(e).data(), p[static_cast<std::size_t>(j)].data(), p[static_cast<std::size_t>(i)].data(), m);
  }
  return out;
}

std::vector<double> weights_on(const BlockMeasurement& meas, const WeightedGraph& w) {
  const GcwOperator s = build_gcw(w, meas);
  return {s.weights().begin(), s.weights().end()};
}

}  // namespace detail

Schedule Schedule::defaults(int t0, int t_max) {
  Schedule s;
  s.t0 = t0;
  s.t_max = t_max;
  for (int t = 0; t <= t0; ++t) s.betas.push_back(std::min(std::pow(2.0, t), 40.0));
  for (int t = 1; t <= t_max; ++t) {
    s.alphas.push_back(std::min(std::pow(1.2, t - 1), 40.0));
    s.lambdas.push_back(static_cast<double>(t) / (t + 1));
  }
  return s;
}

void Schedule::validate() const {
  if (t0 < 0) throw InputError("schedule: t0 must be >= 0");
  if (t_max < 1) throw InputError("schedule: t_max must be >= 1");
  if (betas.size() != static_cast<std::size_t>(t0) + 1) throw InputError("schedule: need t0 + 1 betas");
  if (alphas.size() != static_cast<std::size_t>(t_max) || lambdas.size() != static_cast<std::size_t>(t_max)) {
    throw InputError("schedule: need t_max alphas and lambdas");
  }
  const auto nondecreasing = [](const std::vector<double>& v) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!std::isfinite(v[k]) || (k > 0 && v[k] < v[k - 1])) return false;
    }
    return true;
  };
  if (!nondecreasing(betas)) throw InputError("schedule: betas must be finite and nondecreasing");
  if (!nondecreasing(alphas)) throw InputError("schedule: alphas must be finite and nondecreasing");
  for (double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) throw InputError("schedule: lambdas must lie in [0, 1]");
  }
}

std::uint64_t hash_values(std::span<const double> values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int k = 0; k < 8; ++k) {
      h ^= bits & 0xffU;
      h *= 0x100000001b3ULL;
      bits >>= 8;
    }
  }
  return h;
}

int count_changed(const std::vector<Permutation>& a, const std::vector<Permutation>& b) {
  if (a.size() != b.size()) throw InputError("estimate sizes differ");
  int changed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) changed += a[i] != b[i];
  return changed;
}

SolverReport apply_gauge(SolverReport report, const Permutation& q) {
  for (Permutation& p : report.estimate) p = compose(p, q);
  return report;
}

int spectral_anchor(const Graph& g) {
  int best = 0;
  for (int i = 1; i < g.num_nodes(); ++i) {
    if (g.degree(i) > g.degree(best)) best = i;
  }
  return best;
}

std::vector<Permutation> wls_spectral_step(const BlockMeasurement& meas, std::span<const double> w) {
  const Graph& g = *meas.graph();
  const int n = g.num_nodes();
  const int m = meas.block_size();
  if (w.size() != static_cast<std::size_t>(g.num_edges())) throw InputError("weight count mismatch");

  std::vector<double> degree(static_cast<std::size_t>(n), 0.0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    degree[static_cast<std::size_t>(g.edge(e).i)] += w[static_cast<std::size_t>(e)];
    degree[static_cast<std::size_t>(g.edge(e).j)] += w[static_cast<std::size_t>(e)];
  }
  for (int i = 0; i < n; ++i) {
    if (!(degree[static_cast<std::size_t>(i)] > 0.0)) {
      throw SolverError("node " + std::to_string(i) + " has zero weighted degree");
    }
  }

  const std::size_t dim = static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
  std::vector<double> normalized(dim * dim, 0.0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    const double s = w[static_cast<std::size_t>(e)] /
                     std::sqrt(degree[static_cast<std::size_t>(i)] * degree[static_cast<std::size_t>(j)]);
    const Permutation& x = meas.block(e);
    for (int r = 0; r < m; ++r) {
      const std::size_t row = static_cast<std::size_t>(i) * m + r;
      const std::size_t col = static_cast<std::size_t>(j) * m + x[r];
      normalized[row * dim + col] = s;
      normalized[col * dim + row] = s;
    }
  }
  const EigenPairs eig = top_eigenpairs(std::move(normalized), static_cast<int>(dim), m);

  // Rows of D^-1/2 U for node i.
  const auto block_rows = [&](int i) {
    SquareBlock v(m);
    const double scale = 1.0 / std::sqrt(degree[static_cast<std::size_t>(i)]);
    for (int r = 0; r < m; ++r) {
      for (int k = 0; k < m; ++k) v(r, k) = scale * eig.vector(i * m + r, k);
    }
    return v;
  };
  const SquareBlock vr = block_rows(spectral_anchor(g));
  std::vector<Permutation> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const SquareBlock vi = block_rows(i);
    SquareBlock prod(m);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        double acc = 0.0;
        for (int k = 0; k < m; ++k) acc += vi(r, k) * vr(c, k);
        prod(r, c) = acc;
      }
    }
    out.push_back(project_to_permutation(prod));
  }
  return out;
}

std::vector<Permutation> wls_spectral_step(const BlockMeasurement& meas, const WeightedGraph& w) {
  return wls_spectral_step(meas, detail::weights_on(meas, w));
}

std::vector<Permutation> wls_power_step(const BlockMeasurement& meas, std::span<const double> w,
                                        const std::vector<Permutation>& current) {
  const Graph& g = *meas.graph();
  const int m = meas.block_size();
  if (w.size() != static_cast<std::size_t>(g.num_edges())) throw InputError("weight count mismatch");
  if (current.size() != static_cast<std::size_t>(g.num_nodes())) throw InputError("estimate count mismatch");
  std::vector<Permutation> out;
  out.reserve(current.size());
  for (int i = 0; i < g.num_nodes(); ++i) {
    SquareBlock acc(m);
    double total = 0.0;
    for (int j : g.neighbors(i)) {
      const double wij = w[static_cast<std::size_t>(g.find(i, j))];
      if (wij == 0.0) continue;
      acc.add_permutation(compose(meas.block(i, j), current[static_cast<std::size_t>(j)]), wij);
      total += wij;
    }
    out.push_back(total > 0.0 ? project_to_permutation(acc) : current[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<Permutation> wls_power_step(const BlockMeasurement& meas, const WeightedGraph& w,
                                        const std::vector<Permutation>& current) {
  return wls_power_step(meas, detail::weights_on(meas, w), current);
}

SolverReport spectral_solve(const BlockMeasurement& meas, const WeightedGraph* weights) {
  const detail::Stopwatch clock;
  const std::vector<double> w = weights != nullptr
                                    ? detail::weights_on(meas, *weights)
                                    : std::vector<double>(static_cast<std::size_t>(meas.graph()->num_edges()), 1.0);
  SolverReport report;
  report.estimate = wls_spectral_step(meas, w);
  report.iterations = 1;
  report.converged = true;
  report.trace.push_back({hash_values(w), static_cast<int>(report.estimate.size())});
  report.wall_ms = clock.elapsed_ms();
  return report;
}

SolverReport ppm_solve(const BlockMeasurement& meas, const std::vector<Permutation>* init, int t_max) {
  const detail::Stopwatch clock;
  const Graph& g = *meas.graph();
  const std::vector<double> ones(static_cast<std::size_t>(g.num_edges()), 1.0);
  std::vector<Permutation> p = init != nullptr ? *init : wls_spectral_step(meas, ones);
  if (p.size() != static_cast<std::size_t>(g.num_nodes())) throw InputError("init has wrong node count");
  const std::uint64_t hash = hash_values(ones);

  SolverReport report;
  for (int t = 1; t <= t_max; ++t) {
    std::vector<Permutation> next;
    next.reserve(p.size());
    for (int i = 0; i < g.num_nodes(); ++i) {
      SquareBlock acc = SquareBlock::from_permutation(p[static_cast<std::size_t>(i)]);
      for (int j : g.neighbors(i)) acc.add_permutation(compose(meas.block(i, j), p[static_cast<std::size_t>(j)]), 1.0);
      next.push_back(project_to_permutation(acc));
    }
    const int changed = count_changed(p, next);
    report.trace.push_back({hash, changed});
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

namespace {

// Generic IRLS loop: weights from the residual agreements, then one WLS step.
template <typename WeightFn>
SolverReport irls_loop(const BlockMeasurement& meas, WlsVariant variant, int t_max, WeightFn&& weight_fn) {
  const detail::Stopwatch clock;
  const std::vector<double> ones(static_cast<std::size_t>(meas.graph()->num_edges()), 1.0);
  std::vector<Permutation> p = wls_spectral_step(meas, ones);
  SolverReport report;
  for (int t = 1; t <= t_max; ++t) {
    const std::vector<double> w = weight_fn(detail::edge_agreements(meas, p));
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

SolverReport irls_l1_solve(const BlockMeasurement& meas, double delta, int t_max) {
  if (!(delta > 0.0)) throw InputError("irls-l1: delta must be positive");
  const int m = meas.block_size();
  return irls_loop(meas, WlsVariant::kSpectral, t_max, [&](const std::vector<int>& agree) {
    std::vector<double> w(agree.size());
    for (std::size_t e = 0; e < agree.size(); ++e) {
      const double r = std::sqrt(2.0 * (m - agree[e]));
      w[e] = 1.0 / std::max(r, delta);
    }
    return w;
  });
}

SolverReport irls_cauchy_solve(const BlockMeasurement& meas, WlsVariant variant, std::optional<double> scale,
                               int t_max) {
  if (scale && !(*scale > 0.0)) throw InputError("irls-cauchy: scale must be positive");
  const int m = meas.block_size();
  return irls_loop(meas, variant, t_max, [&](const std::vector<int>& agree) {
    std::vector<double> r(agree.size());
    std::vector<double> nonzero;
    for (std::size_t e = 0; e < agree.size(); ++e) {
      r[e] = std::sqrt(2.0 * (m - agree[e]));
      if (r[e] > 0.0) nonzero.push_back(r[e]);
    }
    std::vector<double> w(agree.size(), 1.0);
    double c = 0.0;
    if (scale) {
      c = *scale;
    } else if (!nonzero.empty()) {
      const std::size_t mid = nonzero.size() / 2;
      std::nth_element(nonzero.begin(), nonzero.begin() + static_cast<std::ptrdiff_t>(mid), nonzero.end());
      c = nonzero[mid];
      if (nonzero.size() % 2 == 0) {
        c = 0.5 * (c + *std::max_element(nonzero.begin(), nonzero.begin() + static_cast<std::ptrdiff_t>(mid)));
      }
    }
    if (c > 0.0) {
      for (std::size_t e = 0; e < w.size(); ++e) w[e] = 1.0 / (1.0 + (r[e] / c) * (r[e] / c));
    }
    return w;
  });
}

}  // namespace permsync
