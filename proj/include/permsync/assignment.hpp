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

#pragma once

#include <vector>

#include "permsync/permutation.hpp"

namespace permsync {

/// Maximum-score linear assignment on a dense m x m score matrix.
///
/// Solved with the O(m^3) shortest-augmenting-path variant of Kuhn-Munkres
/// on the negated scores. Among all optimal assignments the one with the
/// lexicographically smallest row->column map is returned: the final duals
/// identify every optimal assignment as a perfect matching on the tight
/// entries, and the smallest such matching is then built greedily row by
/// row.
struct AssignmentResult {
  Permutation assignment;
  double score = 0.0;
};

/// Throws InputError on a non-square or non-finite score matrix.
AssignmentResult solve_max_assignment(const SquareBlock& scores);

/// argmax over permutations P of <P, M>, equivalently the Frobenius-nearest
/// permutation to M.
Permutation project_to_permutation(const SquareBlock& m);

}  // namespace permsync
