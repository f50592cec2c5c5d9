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

namespace permsync {

/// Leading eigenpairs of a dense symmetric matrix.
struct EigenPairs {
  int dim = 0;
  int count = 0;
  std::vector<double> values;   // descending
  std::vector<double> vectors;  // column-major dim x count; column k pairs with values[k]
  double vector(int row, int k) const {
    return vectors[static_cast<std::size_t>(k) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(row)];
  }
};

/// The `count` largest eigenpairs of the symmetric dim x dim row-major matrix
/// `a` (only the upper triangle is read). Each eigenvector is normalized and
/// its sign fixed so that its first entry of magnitude above 1e-10 times its
/// largest magnitude is positive.
///
/// Uses the unblocked Householder reduction, MRRR on the tridiagonal matrix
/// and an unblocked back-transformation, so only level-2 BLAS is involved.
/// Every returned pair is checked against ||A v - lambda v||; a residual
/// above 1e-8 (relative to the largest |entry| of A times dim) throws
/// SolverError, as does a LAPACK failure. Throws InputError on bad sizes.
EigenPairs top_eigenpairs(std::vector<double> a, int dim, int count);

}  // namespace permsync
