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

// Reference computations for the tests. Everything here works on dense
// matrices or exhaustive enumeration and shares no code with the library
// beyond the Permutation value type.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "permsync/graph.hpp"
#include "permsync/permutation.hpp"
#include "permsync/rng.hpp"

namespace oracle {

using Dense = std::vector<double>;  // row-major square

inline Dense dense_of(const permsync::Permutation& p) {
  const int m = p.size();
  Dense d(static_cast<std::size_t>(m) * m, 0.0);
  for (int r = 0; r < m; ++r) d[static_cast<std::size_t>(r) * m + p.map()[r]] = 1.0;
  return d;
}

inline Dense matmul(const Dense& a, const Dense& b, int n) {
  Dense c(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) c[i * n + j] += a[i * n + k] * b[k * n + j];
    }
  }
  return c;
}

inline Dense transpose(const Dense& a, int n) {
  Dense t(a.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) t[j * n + i] = a[i * n + j];
  }
  return t;
}

inline double frobenius_inner(const Dense& a, const Dense& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double frobenius_sq_diff(const Dense& a, const Dense& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

// Best objective over all m! assignments, found by exhaustive search over
// index arrays.
inline double best_assignment_value(const Dense& scores, int m) {
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (int r = 0; r < m; ++r) s += scores[static_cast<std::size_t>(r) * m + perm[r]];
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline double assignment_value(const Dense& scores, const permsync::Permutation& p) {
  double s = 0.0;
  const int m = p.size();
  for (int r = 0; r < m; ++r) s += scores[static_cast<std::size_t>(r) * m + p.map()[r]];
  return s;
}

// Block (i, j) of a dense nm x nm matrix.
inline Dense block_of(const Dense& big, int nm, int m, int i, int j) {
  Dense b(static_cast<std::size_t>(m) * m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) b[r * m + c] = big[(i * m + r) * static_cast<std::size_t>(nm) + j * m + c];
  }
  return b;
}

// (W kron 1_m) .* X~ assembled densely from scratch.
inline Dense dense_gcw(const permsync::BlockMeasurement& meas, const std::vector<double>& w_dense) {
  const int n = meas.num_nodes();
  const int m = meas.block_size();
  const int nm = n * m;
  Dense s(static_cast<std::size_t>(nm) * nm, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || !meas.graph()->has_edge(i, j)) continue;
      const Dense x = dense_of(meas.block(i, j));
      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
          s[(i * m + r) * static_cast<std::size_t>(nm) + j * m + c] = w_dense[i * n + j] * x[r * m + c];
        }
      }
    }
  }
  return s;
}

// All walks of exactly `length` edges from a to b, as node sequences.
inline void walks(const permsync::Graph& g, int a, int b, int length, std::vector<int>& prefix,
                  std::vector<std::vector<int>>& out) {
  if (length == 0) {
    if (a == b) out.push_back(prefix);
    return;
  }
  for (int k = 0; k < g.num_nodes(); ++k) {
    if (!g.has_edge(a, k)) continue;
    prefix.push_back(k);
    walks(g, k, b, length - 1, prefix, out);
    prefix.pop_back();
  }
}

inline std::vector<std::vector<int>> walks(const permsync::Graph& g, int a, int b, int length) {
  std::vector<int> prefix{a};
  std::vector<std::vector<int>> out;
  walks(g, a, b, length, prefix, out);
  return out;
}

// Exhaustive list of all permutations of size m (as index arrays).
inline std::vector<permsync::Permutation> all_permutations(int m) {
  std::vector<std::int32_t> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  std::vector<permsync::Permutation> out;
  do {
    out.emplace_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline permsync::Permutation random_permutation(permsync::SeededRng& rng, int m) {
  std::vector<std::int32_t> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  for (int k = m - 1; k > 0; --k) std::swap(p[k], p[rng.below(static_cast<std::uint64_t>(k) + 1)]);
  return permsync::Permutation(std::move(p));
}

}  // namespace oracle
