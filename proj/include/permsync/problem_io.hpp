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

// Plain-text formats for problem instances and solver output.
//
// Problem file ("PSYNC 1"), ASCII, LF line endings, single spaces, 0-based:
//
//   PSYNC 1
//   <n> <m>
//   TRUTH                      (optional)
//   <m images of P*_0>
//   ...                        (n lines)
//   EDGES
//   <i> <j> [<b>]              (b = 1 marks a bad edge; omitted if unknown)
//   <m images of X~_ij>
//   ...
//
// A map line "c_0 c_1 ... c_{m-1}" encodes the permutation with row r sent
// to column c_r. Solution files replace TRUTH/EDGES by a SOLUTION section of
// n map lines.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "permsync/graph.hpp"
#include "permsync/models.hpp"
#include "permsync/permutation.hpp"

namespace permsync {

void write_problem(std::ostream& out, const ProblemInstance& inst);
void write_problem(const std::filesystem::path& path, const ProblemInstance& inst);

/// Throws ParseError (with the 1-based line number) on malformed input.
ProblemInstance read_problem(std::istream& in);
ProblemInstance read_problem(const std::filesystem::path& path);

void write_solution(std::ostream& out, int m, const std::vector<Permutation>& estimate);
void write_solution(const std::filesystem::path& path, int m, const std::vector<Permutation>& estimate);
std::vector<Permutation> read_solution(std::istream& in);
std::vector<Permutation> read_solution(const std::filesystem::path& path);

/// CSV with header "i,j,affinity", one row per edge in edge order.
void write_affinity_csv(std::ostream& out, const EdgeValues& affinity);

}  // namespace permsync
