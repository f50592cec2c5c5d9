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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "permsync/analysis.hpp"
#include "permsync/error.hpp"
#include "permsync/models.hpp"
#include "permsync/rng.hpp"

namespace {

using namespace permsync;

ProblemInstance make(ModelKind kind, std::uint64_t seed, int n = 30, int m = 6) {
  ModelConfig cfg;
  cfg.model = kind;
  cfg.n = n;
  cfg.m = m;
  cfg.q = 0.3;
  cfg.epsilon = 0.4;
  cfg.nc = 3;
  cfg.mc = 10;
  SeededRng rng(seed);
  return generate(cfg, rng);
}

// Normalized squared Frobenius error from dense matrices.
double dense_error(const std::vector<Permutation>& est, const std::vector<Permutation>& truth,
                   const std::vector<std::pair<int, int>>& pairs) {
  const int m = truth.front().size();
  double num = 0.0, den = 0.0;
  for (const auto& [i, j] : pairs) {
    const auto a = oracle::matmul(oracle::dense_of(est[i]), oracle::transpose(oracle::dense_of(est[j]), m), m);
    const auto b = oracle::matmul(oracle::dense_of(truth[i]), oracle::transpose(oracle::dense_of(truth[j]), m), m);
    num += oracle::frobenius_sq_diff(a, b);
    den += oracle::frobenius_inner(b, b);
  }
  return num / den;
}

TEST(Analysis, SwappedPairHasErrorTwo) {
  const std::vector<Permutation> truth = {Permutation::identity(2), Permutation::identity(2)};
  const std::vector<Permutation> est = {Permutation({1, 0}), Permutation::identity(2)};
  const auto r = relative_error_all_pairs(est, truth);
  EXPECT_DOUBLE_EQ(r.error, 2.0);
  EXPECT_EQ(r.pairs, 1u);
  EXPECT_EQ(r.histogram[2], 1u);
}

TEST(Analysis, ErrorMatchesDenseFormula) {
  SeededRng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 6, m = 2 + trial % 5;
    std::vector<Permutation> est, truth;
    for (int i = 0; i < n; ++i) {
      truth.push_back(oracle::random_permutation(rng, m));
      est.push_back(rng.bernoulli(0.5) ? truth.back() : oracle::random_permutation(rng, m));
    }
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    EXPECT_NEAR(relative_error_all_pairs(est, truth).error, dense_error(est, truth, pairs), 1e-12);
  }
}

TEST(Analysis, ErrorIsGaugeInvariant) {
  const auto inst = make(ModelKind::kLbc, 102);
  SeededRng rng(103);
  std::vector<Permutation> est;
  for (int i = 0; i < inst.num_nodes(); ++i) est.push_back(oracle::random_permutation(rng, inst.block_size()));
  SolverReport r;
  r.estimate = est;
  const auto g = apply_gauge(r, oracle::random_permutation(rng, inst.block_size()));
  EXPECT_EQ(model_error(ModelKind::kLbc, inst, est).error, model_error(ModelKind::kLbc, inst, g.estimate).error);
}

TEST(Analysis, ModelErrorChoosesEdgeSet) {
  const auto uni = make(ModelKind::kUniform, 104);
  const auto lac = make(ModelKind::kLac, 105);
  EXPECT_EQ(model_error(ModelKind::kUniform, uni, *uni.truth).edge_set, EdgeSet::kAllPairs);
  const auto r = model_error(ModelKind::kLac, lac, *lac.truth);
  EXPECT_EQ(r.edge_set, EdgeSet::kBadEdges);
  EXPECT_EQ(r.pairs, lac.bad_edges().size());
  EXPECT_EQ(r.error, 0.0);
}

TEST(Analysis, GroundTruthAffinityIsOneExactlyOnGoodEdges) {
  for (auto kind : {ModelKind::kUniform, ModelKind::kSuperspreader, ModelKind::kLbc, ModelKind::kLac}) {
    const auto inst = make(kind, 106);
    const auto a = ground_truth_affinity(inst);
    for (EdgeId e = 0; e < inst.graph()->num_edges(); ++e) {
      EXPECT_EQ(a[e] == 1.0, !(*inst.bad)[e]);
    }
  }
}

TEST(Analysis, SuperspreaderBoundValues) {
  EXPECT_NEAR(superspreader_affinity_bound(0.3, 0.5, 40.0), 1.7 / (1.7 + 0.3 * std::exp(3.0)), 1e-15);
  EXPECT_NEAR(superspreader_affinity_bound(0.3, 0.5, 40.0), 0.2201, 1e-4);
  double prev = 1.0;
  for (double beta : {1.0, 5.0, 10.0, 40.0, 80.0}) {
    const double b = superspreader_affinity_bound(0.3, 0.5, beta);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(Analysis, MessagePassingOracleAgreesOnTinyInstance) {
  const auto inst = make(ModelKind::kUniform, 107, 7, 3);
  Schedule s = Schedule::defaults(2, 5);
  for (int power : {2, 3}) {
    const auto fast = cemp_init(inst.meas, s, power);
    const auto slow = cemp_message_passing_oracle(inst.meas, s, power);
    for (EdgeId e = 0; e < inst.graph()->num_edges(); ++e) EXPECT_NEAR(fast[e], slow[e], 1e-10);
  }
}

TEST(Analysis, Prop31HoldsOnSmallInstance) {
  const auto inst = make(ModelKind::kUniform, 108, 12, 4);
  for (int power : {2, 3}) {
    const auto c = verify_cycle_ratio(inst, power);
    EXPECT_NE(c.verdict, Verdict::kFail);
    EXPECT_LE(c.max_deviation, 1e-12);
  }
}

TEST(Analysis, PpmUpdateWithoutCorruptionReturnsTruth) {
  ModelConfig cfg;
  cfg.model = ModelKind::kSuperspreader;
  cfg.n = 30;
  cfg.m = 5;
  cfg.epsilon = 1.0;
  SeededRng rng(109);
  const auto inst = generate(cfg, rng);
  for (int node : {0, 4, 17}) EXPECT_EQ(ppm_node_update(inst.meas, *inst.truth, node), (*inst.truth)[node]);
}

TEST(Analysis, CycleStatsOnCompleteGraph) {
  ModelConfig cfg;
  cfg.model = ModelKind::kSuperspreader;
  cfg.n = 10;
  cfg.m = 4;
  cfg.epsilon = 0.5;
  SeededRng rng(110);
  const auto inst = generate(cfg, rng);
  const auto s = cycle_stats(inst);
  const int bad_at_i0 = static_cast<int>(inst.bad_edges().size());
  for (EdgeId e = 0; e < inst.graph()->num_edges(); ++e) {
    const Edge ed = inst.graph()->edge(e);
    EXPECT_EQ(s.common[e], 8);
    EXPECT_EQ(s.good[e] + s.bad[e], 8);
    if (ed.i != 0 && ed.j != 0) {
      // Only the path through i0 can be bad.
      const bool via_bad = (*inst.bad)[inst.graph()->find(0, ed.i)] || (*inst.bad)[inst.graph()->find(0, ed.j)];
      EXPECT_EQ(s.bad[e], via_bad ? 1 : 0);
    } else {
      EXPECT_LE(s.bad[e], bad_at_i0);
    }
  }
}

TEST(Analysis, BruteForceAssignmentFindsSmallestMaximizer) {
  const SquareBlock ties(2, {1, 1, 1, 1});
  EXPECT_EQ(brute_force_assignment(ties).first, Permutation::identity(2));
  const SquareBlock s(3, {3, 1, 0, 2, 4, 1, 0, 1, 5});
  EXPECT_DOUBLE_EQ(brute_force_assignment(s).second, 12.0);
}

TEST(Analysis, SuiteNamesAndUnknownSuite) {
  const auto names = suite_names();
  EXPECT_EQ(names.size(), 6u);
  EXPECT_THROW(run_suite("nonexistent", 1), InputError);
  EXPECT_EQ(verdict_name(Verdict::kVacuous), "VACUOUS");
}

TEST(Analysis, InvariantSuitePasses) {
  const auto r = run_suite("invariants", 5);
  EXPECT_EQ(r.verdict, Verdict::kPass);
}

}  // namespace
