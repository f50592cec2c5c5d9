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

// Checkable consequences of the method's guarantees, packaged as suites.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "permsync/analysis.hpp"
#include "permsync/assignment.hpp"
#include "permsync/error.hpp"
#include "permsync/gcw.hpp"
#include "permsync/rng.hpp"

namespace permsync {

CycleRatioCheck verify_cycle_ratio(const ProblemInstance& inst, int power) {
  if (!inst.truth || !inst.bad) throw InputError("cycle ratio check: truth and bad-edge flags required");
  const Graph& g = *inst.graph();
  const int m = inst.block_size();
  std::vector<double> w(static_cast<std::size_t>(g.num_edges()));
  for (std::size_t e = 0; e < w.size(); ++e) w[e] = (*inst.bad)[e] ? 0.0 : 1.0;
  const GcwOperator s(inst.meas, std::move(w));
  const RatioTable ratio = squared_gcw_ratio(s, power, [m](EdgeId) { return SquareBlock(m); });

  CycleRatioCheck out;
  out.applicable = true;
  const auto& truth = *inst.truth;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto idx = static_cast<std::size_t>(e);
    if (ratio.fell_back[idx]) {
      out.applicable = false;
      continue;
    }
    const auto [i, j] = g.edge(e);
    const Permutation x = relative(truth[static_cast<std::size_t>(i)], truth[static_cast<std::size_t>(j)]);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        const double expected = x[r] == c ? 1.0 : 0.0;
        out.max_deviation = std::max(out.max_deviation, std::abs(ratio.blocks[idx](r, c) - expected));
      }
    }
    ++out.edges_checked;
  }
  if (out.edges_checked == 0) {
    out.verdict = Verdict::kVacuous;
  } else {
    out.verdict = out.max_deviation <= 1e-12 ? Verdict::kPass : Verdict::kFail;
  }
  return out;
}

double superspreader_affinity_bound(double epsilon, double mu, double beta0) {
  return (2.0 - epsilon) / (2.0 - epsilon + epsilon * std::exp(beta0 * mu * epsilon / 2.0));
}

namespace {

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanEstimate summarize(const std::vector<double>& xs) {
  MeanEstimate out;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) out.mean += x;
  out.mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.stderr_ = xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return out;
}

Schedule one_iteration_schedule(double beta0) {
  Schedule s = Schedule::defaults(1, 1);
  s.betas = {beta0, beta0};
  return s;
}

}  // namespace

CorruptionBoundCheck verify_superspreader_bound(const ModelConfig& cfg, double beta0, int trials,
                                                std::uint64_t seed, int mc_samples) {
  if (cfg.model != ModelKind::kSuperspreader) throw InputError("superspreader bound: superspreader model required");
  if (trials < 1 || mc_samples < 2) throw InputError("superspreader bound: need at least one trial and two samples");
  cfg.validate();
  const int m = cfg.m;

  // Both sides of the corruption condition, sampled with random ground truth
  // at i0, j and k.
  SeededRng mc(seed, 0x7452);
  std::vector<double> lhs(static_cast<std::size_t>(mc_samples));
  std::vector<double> rhs(static_cast<std::size_t>(mc_samples));
  for (int s = 0; s < mc_samples; ++s) {
    const Permutation p_i0 = sample_haar_permutation(mc, m);
    const Permutation p_j = sample_haar_permutation(mc, m);
    const Permutation p_k = sample_haar_permutation(mc, m);
    const Permutation x_i0j = sample_corrupted_block(cfg, mc, p_i0, p_j);
    const Permutation x_i0k = sample_corrupted_block(cfg, mc, p_i0, p_k);
    lhs[static_cast<std::size_t>(s)] = squared_distance(x_i0j, relative(p_i0, p_j));
    rhs[static_cast<std::size_t>(s)] = squared_distance(compose(x_i0k.transpose(), x_i0j), relative(p_k, p_j));
  }
  const MeanEstimate l = summarize(lhs);
  const MeanEstimate r = summarize(rhs);

  CorruptionBoundCheck out;
  out.lhs = l.mean;
  out.lhs_stderr = l.stderr_;
  out.rhs = r.mean;
  out.rhs_stderr = r.stderr_;
  out.condition_holds = l.mean <= r.mean;
  out.mu = l.mean / (2.0 * m);
  out.mu_bg = out.mu_gb = 1.0 - out.mu;
  out.mu_bb = 1.0 - r.mean / (2.0 * m);
  out.bound = superspreader_affinity_bound(cfg.epsilon, out.mu, beta0);

  const Schedule schedule = one_iteration_schedule(beta0);
  for (int t = 0; t < trials; ++t) {
    SeededRng rng(derive_seed(seed, 0, static_cast<std::uint64_t>(t)));
    const ProblemInstance inst = generate(cfg, rng);
    const AffinityMatrix a = cemp_init(inst.meas, schedule);
    const AffinityMatrix a_star = ground_truth_affinity(inst);
    double achieved = 0.0;
    for (std::size_t e = 0; e < a.values().size(); ++e) {
      achieved = std::max(achieved, std::abs(a.values()[e] - a_star.values()[e]));
    }
    out.achieved.push_back(achieved);
    if (achieved <= out.bound) ++out.within_bound;
  }
  if (!out.condition_holds) {
    out.verdict = Verdict::kVacuous;
  } else {
    out.verdict = 10 * out.within_bound >= 9 * trials ? Verdict::kPass : Verdict::kFail;
  }
  return out;
}

Permutation ppm_node_update(const BlockMeasurement& meas, const std::vector<Permutation>& current, int node) {
  if (current.size() != static_cast<std::size_t>(meas.num_nodes())) {
    throw InputError("ppm_node_update: estimate count mismatch");
  }
  SquareBlock acc = SquareBlock::from_permutation(current[static_cast<std::size_t>(node)]);
  for (int j : meas.graph()->neighbors(node)) {
    acc.add_permutation(compose(meas.block(node, j), current[static_cast<std::size_t>(j)]), 1.0);
  }
  return project_to_permutation(acc);
}

PpmFailureCheck verify_ppm_failure(int n, int m, double epsilon, double mix_prob, int trials, std::uint64_t seed,
                                   double eps0) {
  if (trials < 1) throw InputError("ppm-failure: need at least one trial");
  PpmFailureCheck out;
  out.trials = trials;
  out.condition_value = 2.0 * epsilon * std::sqrt(2.0 * m) + (1.0 - 2.0 * epsilon) * eps0;
  if (!(out.condition_value < 1.0)) {
    out.verdict = Verdict::kVacuous;
    return out;
  }

  ModelConfig cfg;
  cfg.model = ModelKind::kSuperspreader;
  cfg.n = n;
  cfg.m = m;
  cfg.p = 1.0;
  cfg.epsilon = epsilon;
  cfg.i0 = 0;
  cfg.sampler = CorruptionSampler::kMixture;
  cfg.mix_prob = mix_prob;
  for (int t = 0; t < trials; ++t) {
    SeededRng rng(derive_seed(seed, 0, static_cast<std::uint64_t>(t)));
    SeededRng crpt_rng = rng.split(7);
    cfg.p_crpt = sample_haar_permutation(crpt_rng, m);
    const ProblemInstance inst = generate(cfg, rng);
    const auto& truth = *inst.truth;
    const Permutation& p_i0 = truth[static_cast<std::size_t>(cfg.i0)];

    SquareBlock q(m);
    const auto nbrs = inst.graph()->neighbors(cfg.i0);
    for (int j : nbrs) {
      q.add_permutation(compose(inst.meas.block(cfg.i0, j), truth[static_cast<std::size_t>(j)]),
                        1.0 / static_cast<double>(nbrs.size()));
    }
    q.add_permutation(*cfg.p_crpt, -1.0);
    double dist = 0.0;
    for (double v : q.values()) dist += v * v;
    dist = std::sqrt(dist);
    out.q_distance.push_back(dist);

    if (dist >= eps0 || *cfg.p_crpt == p_i0) continue;
    ++out.qualifying;
    if (ppm_node_update(inst.meas, truth, cfg.i0) == *cfg.p_crpt) ++out.returned_crpt;
  }
  if (out.qualifying == 0) {
    out.verdict = Verdict::kVacuous;
  } else {
    out.verdict = out.returned_crpt == out.qualifying ? Verdict::kPass : Verdict::kFail;
  }
  return out;
}

namespace {

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::kFail || b == Verdict::kFail) return Verdict::kFail;
  if (a == Verdict::kPass || b == Verdict::kPass) return Verdict::kPass;
  return Verdict::kVacuous;
}

SquareBlock random_scores(SeededRng& rng, int m, bool integral) {
  SquareBlock s(m);
  for (double& v : s.values()) v = integral ? static_cast<double>(rng.below(4)) : rng.uniform01();
  return s;
}

double assignment_score(const SquareBlock& s, const Permutation& p) {
  double total = 0.0;
  for (int r = 0; r < s.size(); ++r) total += s(r, p[r]);
  return total;
}

SuiteResult suite_hungarian(std::uint64_t seed) {
  SeededRng rng(seed, 0x4855);
  int mismatches = 0;
  int tie_breaks = 0;
  constexpr int kMatrices = 1000;
  for (int k = 0; k < kMatrices; ++k) {
    const int m = 1 + k % 6;
    // Small integer entries produce many ties, which also exercises the
    // lexicographic tie-break.
    const bool integral = k % 2 == 0;
    const SquareBlock s = random_scores(rng, m, integral);
    const Permutation fast = project_to_permutation(s);
    const auto [slow, best] = brute_force_assignment(s);
    if (assignment_score(s, fast) != assignment_score(s, slow)) ++mismatches;
    if (fast != slow) ++tie_breaks;
  }
  SuiteResult out;
  out.lines.push_back(fmt::format("matrices={} objective_mismatches={} tie_break_mismatches={}", kMatrices,
                                  mismatches, tie_breaks));
  out.verdict = mismatches == 0 && tie_breaks == 0 ? Verdict::kPass : Verdict::kFail;
  return out;
}

ModelConfig small_uniform(SeededRng& rng, int n_lo, int n_hi) {
  ModelConfig cfg;
  cfg.model = ModelKind::kUniform;
  cfg.n = n_lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_hi - n_lo + 1)));
  cfg.m = 3 + static_cast<int>(rng.below(4));
  cfg.p = 0.6 + 0.4 * rng.uniform01();
  cfg.q = 0.1 + 0.3 * rng.uniform01();
  return cfg;
}

SuiteResult suite_cycle_ratio(std::uint64_t seed) {
  SuiteResult out;
  SeededRng rng(seed, 0x3331);
  int applicable = 0;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int power = 2 + k % 2;
    const ModelConfig cfg = small_uniform(rng, 6, 20);
    SeededRng gen(derive_seed(seed, 31, static_cast<std::uint64_t>(k)));
    const ProblemInstance inst = generate(cfg, gen);
    const CycleRatioCheck c = verify_cycle_ratio(inst, power);
    out.verdict = combine(out.verdict, c.verdict);
    if (c.applicable) ++applicable;
    worst = std::max(worst, c.max_deviation);
  }
  out.lines.push_back(fmt::format("instances=50 fully_applicable={} max_deviation={:.3e}", applicable, worst));
  return out;
}

SuiteResult suite_message_passing(std::uint64_t seed) {
  SuiteResult out;
  SeededRng rng(seed, 0x3432);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int power = 2 + k % 2;
    const int t0 = static_cast<int>(rng.below(4));
    const ModelConfig cfg = small_uniform(rng, 5, 12);
    SeededRng gen(derive_seed(seed, 42, static_cast<std::uint64_t>(k)));
    const ProblemInstance inst = generate(cfg, gen);
    const Schedule schedule = Schedule::defaults(t0, 1);
    const AffinityMatrix fast = cemp_init(inst.meas, schedule, power);
    const AffinityMatrix slow = cemp_message_passing_oracle(inst.meas, schedule, power);
    for (std::size_t e = 0; e < fast.values().size(); ++e) {
      worst = std::max(worst, std::abs(fast.values()[e] - slow.values()[e]));
    }
  }
  out.lines.push_back(fmt::format("instances=50 max_deviation={:.3e}", worst));
  out.verdict = worst <= 1e-10 ? Verdict::kPass : Verdict::kFail;
  return out;
}

SuiteResult suite_superspreader(std::uint64_t seed) {
  ModelConfig cfg;
  cfg.model = ModelKind::kSuperspreader;
  cfg.n = 200;
  cfg.m = 10;
  cfg.p = 1.0;
  cfg.epsilon = 0.3;
  cfg.sampler = CorruptionSampler::kLac;
  const CorruptionBoundCheck c = verify_superspreader_bound(cfg, 40.0, 20, seed);
  SuiteResult out;
  out.lines.push_back(fmt::format("lhs={:.5f}+-{:.5f} rhs={:.5f}+-{:.5f} condition={}", c.lhs, c.lhs_stderr, c.rhs,
                                  c.rhs_stderr, c.condition_holds ? "holds" : "violated"));
  out.lines.push_back(fmt::format("mu={:.4f} mu_bb={:.4f} mu_bg={:.4f} bound={:.6f}", c.mu, c.mu_bb, c.mu_bg,
                                  c.bound));
  const double worst = c.achieved.empty() ? 0.0 : *std::max_element(c.achieved.begin(), c.achieved.end());
  out.lines.push_back(fmt::format("within_bound={}/{} worst={:.6f}", c.within_bound, c.achieved.size(), worst));
  out.verdict = c.verdict;
  return out;
}

SuiteResult suite_ppm_failure(std::uint64_t seed) {
  const PpmFailureCheck c = verify_ppm_failure(500, 10, 0.05, 0.95, 20, seed);
  SuiteResult out;
  const double worst = c.q_distance.empty() ? 0.0 : *std::max_element(c.q_distance.begin(), c.q_distance.end());
  out.lines.push_back(fmt::format("condition={:.4f} qualifying={}/{} returned_crpt={} max_q_distance={:.4f}",
                                  c.condition_value, c.qualifying, c.trials, c.returned_crpt, worst));
  out.verdict = c.verdict;
  return out;
}

SuiteResult suite_invariants(std::uint64_t seed) {
  SuiteResult out;
  SeededRng rng(seed, 0x494e);
  int failures = 0;
  const auto check = [&](bool ok, std::string_view what) {
    if (!ok) {
      ++failures;
      out.lines.push_back(fmt::format("violated: {}", what));
    }
  };
  for (int k = 0; k < 200; ++k) {
    const int m = 2 + static_cast<int>(rng.below(9));
    const Permutation a = sample_haar_permutation(rng, m);
    const Permutation b = sample_haar_permutation(rng, m);
    const Permutation c = sample_haar_permutation(rng, m);
    check(compose(compose(a, b), c) == compose(a, compose(b, c)), "compose is associative");
    check(compose(a, a.transpose()).is_identity(), "transpose is the inverse");
    // ||A - B||_F^2 = 2 (m - <A, B>), checked in integers to avoid rounding.
    check(squared_distance(a, b) == 2 * (m - a.agreement(b)) &&
              correlation_affinity(a, b) == static_cast<double>(a.agreement(b)) / m,
          "affinity-distance identity");
    check(a == b || a.agreement(b) <= m - 2, "distinct permutations differ in two rows");
  }

  const std::array<ModelKind, 4> models{ModelKind::kUniform, ModelKind::kSuperspreader, ModelKind::kLbc,
                                        ModelKind::kLac};
  for (std::size_t k = 0; k < models.size(); ++k) {
    ModelConfig cfg;
    cfg.model = models[k];
    cfg.n = 30;
    cfg.m = 6;
    cfg.q = 0.3;
    cfg.epsilon = 0.4;
    cfg.nc = 3;
    cfg.mc = 10;
    SeededRng gen(derive_seed(seed, 77, k));
    const ProblemInstance inst = generate(cfg, gen);
    inst.validate();
    const AffinityMatrix a = ground_truth_affinity(inst);
    for (EdgeId e = 0; e < inst.graph()->num_edges(); ++e) {
      const bool bad = (*inst.bad)[static_cast<std::size_t>(e)] != 0;
      check(bad == (a[e] < 1.0), "ground-truth affinity is 1 exactly on good edges");
      if (cfg.model == ModelKind::kSuperspreader && bad) {
        const Edge& edge = inst.graph()->edge(e);
        check(edge.i == cfg.i0 || edge.j == cfg.i0, "superspreader corruption touches i0");
      }
    }
    const SolverReport r = spectral_solve(inst.meas);
    const Permutation q = sample_haar_permutation(rng, cfg.m);
    const SolverReport shifted = apply_gauge(r, q);
    check(relative_error_all_pairs(r.estimate, *inst.truth).error ==
              relative_error_all_pairs(shifted.estimate, *inst.truth).error,
          "relative error is gauge invariant");
  }
  out.lines.insert(out.lines.begin(), fmt::format("violations={}", failures));
  out.verdict = failures == 0 ? Verdict::kPass : Verdict::kFail;
  return out;
}

constexpr std::array<std::string_view, 6> kSuites{"hungarian", "prop31", "prop42", "thm52", "ppm-failure",
                                                 "invariants"};

}  // namespace

std::span<const std::string_view> suite_names() { return kSuites; }

SuiteResult run_suite(std::string_view name, std::uint64_t seed) {
  if (name == "hungarian") return suite_hungarian(seed);
  if (name == "prop31") return suite_cycle_ratio(seed);
  if (name == "prop42") return suite_message_passing(seed);
  if (name == "thm52") return suite_superspreader(seed);
  if (name == "ppm-failure") return suite_ppm_failure(seed);
  if (name == "invariants") return suite_invariants(seed);
  throw InputError(fmt::format("unknown suite '{}'", name));
}

}  // namespace permsync
