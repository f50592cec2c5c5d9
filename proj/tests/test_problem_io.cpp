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

#include <sstream>
#include <string>

#include "permsync/error.hpp"
#include "permsync/models.hpp"
#include "permsync/problem_io.hpp"
#include "permsync/rng.hpp"

namespace {

using namespace permsync;

ProblemInstance sample_instance() {
  ModelConfig cfg;
  cfg.model = ModelKind::kUniform;
  cfg.n = 12;
  cfg.m = 4;
  cfg.p = 0.6;
  cfg.q = 0.3;
  SeededRng rng(71);
  return generate(cfg, rng);
}

ProblemInstance parse(const std::string& text) {
  std::istringstream in(text);
  return read_problem(in);
}

TEST(ProblemIo, RoundTripIsExact) {
  const auto inst = sample_instance();
  std::ostringstream out;
  write_problem(out, inst);
  const auto back = parse(out.str());
  EXPECT_EQ(back, inst);
  std::ostringstream again;
  write_problem(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(ProblemIo, TruthFreeFileParses) {
  const auto inst = parse("PSYNC 1\n3 2\nEDGES\n0 1\n1 0\n2 1\n0 1\n");
  EXPECT_FALSE(inst.truth.has_value());
  EXPECT_FALSE(inst.bad.has_value());
  EXPECT_EQ(inst.graph()->num_edges(), 2);
  // The second edge was written as (2, 1) and is stored as (1, 2).
  EXPECT_EQ(inst.meas.block(1, 2), Permutation({0, 1}));
  EXPECT_EQ(inst.meas.block(0, 1), Permutation({1, 0}));
}

TEST(ProblemIo, ReversedEdgeTransposesBlock) {
  const auto inst = parse("PSYNC 1\n2 3\nEDGES\n1 0\n1 2 0\n");
  EXPECT_EQ(inst.meas.block(1, 0), Permutation({1, 2, 0}));
  EXPECT_EQ(inst.meas.block(0, 1), Permutation({1, 2, 0}).transpose());
}

TEST(ProblemIo, MalformedInputsAreParseErrors) {
  const char* cases[] = {
      "PSYNC 2\n2 2\nEDGES\n",
      "PERM\n2 2\nEDGES\n",
      "PSYNC 1\n2\nEDGES\n",
      "PSYNC 1\n3 3\nEDGES\n0 1\n0 0 1\n",  // not a bijection
      "PSYNC 1\n3 3\nEDGES\n0 1\n0 1\n",    // short map line
      "PSYNC 1\n3 3\nEDGES\n0 3\n0 1 2\n",  // endpoint out of range
      "PSYNC 1\n3 3\nEDGES\n1 1\n0 1 2\n",  // self-loop
      "PSYNC 1\n3 3\nEDGES\n0 1 2\n0 1 2\n",  // flag not 0/1
      "PSYNC 1\n3 3\nEDGES\n0 1\n0 1 2\n1 0\n0 1 2\n",  // duplicate edge
      "PSYNC 1\n3 3\nEDGES\n0 1 1\n0 1 2\n1 2\n0 1 2\n",  // partial flags
      "PSYNC 1\n3 3\nEDGES\n0 1\n0 x 2\n",
      "PSYNC 1\n3 3\nEDGES\n0 1\n",  // missing map line
  };
  for (const char* text : cases) {
    EXPECT_THROW(parse(text), ParseError) << text;
  }
}

TEST(ProblemIo, ParseErrorReportsLine) {
  try {
    parse("PSYNC 1\n3 3\nEDGES\n0 1\n0 0 1\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5);
  }
}

TEST(ProblemIo, SolutionRoundTrip) {
  const std::vector<Permutation> est = {Permutation({1, 0, 2}), Permutation({2, 1, 0})};
  std::ostringstream out;
  write_solution(out, 3, est);
  std::istringstream in(out.str());
  EXPECT_EQ(read_solution(in), est);
}

TEST(ProblemIo, AffinityCsvHasOneRowPerEdge) {
  const auto inst = sample_instance();
  const EdgeValues vals(inst.graph(), 0.5);
  std::ostringstream out;
  write_affinity_csv(out, vals);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "i,j,affinity");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, inst.graph()->num_edges());
}

}  // namespace
