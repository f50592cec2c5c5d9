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

#include <vector>

#include "oracles.hpp"
#include "permsync/assignment.hpp"
#include "permsync/rng.hpp"

namespace {

using permsync::Permutation;
using permsync::SquareBlock;

TEST(Assignment, SmallExampleMatchesBruteForce) {
  const SquareBlock s(3, {3, 1, 0, 2, 4, 1, 0, 1, 5});
  const auto result = permsync::solve_max_assignment(s);
  EXPECT_EQ(result.assignment, Permutation::identity(3));
  EXPECT_DOUBLE_EQ(result.score, 12.0);
  EXPECT_DOUBLE_EQ(oracle::best_assignment_value({3, 1, 0, 2, 4, 1, 0, 1, 5}, 3), 12.0);
}

TEST(Assignment, RandomMatricesAttainOptimum) {
  permsync::SeededRng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + trial % 7;
    std::vector<double> v(static_cast<std::size_t>(m) * m);
    for (double& x : v) x = rng.uniform01() * 10.0 - 5.0;
    const auto result = permsync::solve_max_assignment(SquareBlock(m, v));
    const double best = oracle::best_assignment_value(v, m);
    EXPECT_NEAR(oracle::assignment_value(v, result.assignment), best, 1e-9);
    EXPECT_NEAR(result.score, best, 1e-9);
  }
}

TEST(Assignment, ProjectionRecoversScaledPermutations) {
  permsync::SeededRng rng(22);
  for (double scale : {1e-12, 1e-6, 1.0, 1e6}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int m = 2 + trial % 9;
      const Permutation p = oracle::random_permutation(rng, m);
      SquareBlock b = SquareBlock::from_permutation(p, scale);
      // Small perturbation relative to the scale must not change the answer.
      for (double& x : b.values()) x += scale * 0.1 * rng.uniform01();
      EXPECT_EQ(permsync::project_to_permutation(b), p) << "scale " << scale;
    }
  }
}

TEST(Assignment, TiesResolveDeterministically) {
  // Every assignment scores zero; the solver must still return a bijection
  // and the same one each time.
  const SquareBlock zeros(4);
  const Permutation first = permsync::project_to_permutation(zeros);
  EXPECT_EQ(first.size(), 4);
  EXPECT_EQ(permsync::project_to_permutation(zeros), first);
  const SquareBlock ones(3, std::vector<double>(9, 1.0));
  EXPECT_EQ(permsync::project_to_permutation(ones), permsync::project_to_permutation(ones));
}

TEST(Assignment, IntegerTiesAttainOptimum) {
  permsync::SeededRng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + trial % 6;
    std::vector<double> v(static_cast<std::size_t>(m) * m);
    for (double& x : v) x = static_cast<double>(rng.below(3));
    const auto result = permsync::solve_max_assignment(SquareBlock(m, v));
    EXPECT_DOUBLE_EQ(oracle::assignment_value(v, result.assignment), oracle::best_assignment_value(v, m));
  }
}

}  // namespace
