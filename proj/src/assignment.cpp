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

#include "permsync/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "permsync/error.hpp"

namespace permsync {
namespace {

// Dual potentials of the min-cost problem on cost = -score, 1-based as in the
// textbook formulation (index 0 is the virtual start column).
struct Duals {
  std::vector<double> u, v;
  std::vector<int> row_of_col;  // row_of_col[j] = row matched to column j
};

Duals hungarian_min_cost(const SquareBlock& scores) {
  const int m = scores.size();
  const double inf = std::numeric_limits<double>::infinity();
  Duals d{std::vector<double>(m + 1, 0.0), std::vector<double>(m + 1, 0.0),
          std::vector<int>(m + 1, 0)};
  std::vector<int> way(m + 1, 0);
  std::vector<double> minv(m + 1);
  std::vector<char> used(m + 1);
  for (int i = 1; i <= m; ++i) {
    d.row_of_col[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = d.row_of_col[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = -scores(i0 - 1, j - 1) - d.u[i0] - d.v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          d.u[d.row_of_col[j]] += delta;
          d.v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (d.row_of_col[j0] != 0);
    do {
      const int j1 = way[j0];
      d.row_of_col[j0] = d.row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  return d;
}

// Kuhn augmenting path restricted to tight entries and free rows/columns.
bool augment(int row, const std::vector<std::vector<int>>& tight, std::vector<int>& col_owner,
             std::vector<char>& visited) {
  for (int c : tight[static_cast<std::size_t>(row)]) {
    if (visited[static_cast<std::size_t>(c)]) continue;
    visited[static_cast<std::size_t>(c)] = 1;
    const int owner = col_owner[static_cast<std::size_t>(c)];
    if (owner < 0 || augment(owner, tight, col_owner, visited)) {
      col_owner[static_cast<std::size_t>(c)] = row;
      return true;
    }
  }
  return false;
}

// Whether rows [first_free, m) can be matched into columns not in `taken`.
bool completable(int first_free, const std::vector<std::vector<int>>& tight,
                 const std::vector<char>& taken) {
  const int m = static_cast<int>(tight.size());
  std::vector<std::vector<int>> free_tight(tight.size());
  for (int r = first_free; r < m; ++r) {
    for (int c : tight[static_cast<std::size_t>(r)]) {
      if (!taken[static_cast<std::size_t>(c)]) free_tight[static_cast<std::size_t>(r)].push_back(c);
    }
  }
  std::vector<int> col_owner(tight.size(), -1);
  std::vector<char> visited(tight.size());
  for (int r = first_free; r < m; ++r) {
    std::fill(visited.begin(), visited.end(), 0);
    if (!augment(r, free_tight, col_owner, visited)) return false;
  }
  return true;
}

}  // namespace

AssignmentResult solve_max_assignment(const SquareBlock& scores) {
  const int m = scores.size();
  if (m < 1) throw InputError("assignment: empty score matrix");
  if (!scores.all_finite()) throw InputError("assignment: non-finite score");

  const Duals d = hungarian_min_cost(scores);

  // Relative tolerance: weighted spectral blocks can be as small as 1e-12
  // while still carrying a clear maximizer.
  double scale = 0.0;
  for (double v : scores.values()) scale = std::max(scale, std::abs(v));
  const double tol = 1e-10 * scale;

  // Reduced cost of (r, c) is -score - u - v >= 0; zero marks an entry that
  // some optimal assignment may use.
  std::vector<std::vector<int>> tight(static_cast<std::size_t>(m));
  bool unique = true;
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      const double reduced = -scores(r, c) - d.u[r + 1] - d.v[c + 1];
      if (reduced <= tol) tight[static_cast<std::size_t>(r)].push_back(c);
    }
    unique = unique && tight[static_cast<std::size_t>(r)].size() == 1;
  }

  std::vector<std::int32_t> map(static_cast<std::size_t>(m), -1);
  if (unique) {
    for (int j = 1; j <= m; ++j) map[static_cast<std::size_t>(d.row_of_col[j] - 1)] = j - 1;
  } else {
    std::vector<char> taken(static_cast<std::size_t>(m), 0);
    for (int r = 0; r < m; ++r) {
      for (int c : tight[static_cast<std::size_t>(r)]) {
        if (taken[static_cast<std::size_t>(c)]) continue;
        taken[static_cast<std::size_t>(c)] = 1;
        if (completable(r + 1, tight, taken)) {
          map[static_cast<std::size_t>(r)] = c;
          break;
        }
        taken[static_cast<std::size_t>(c)] = 0;
      }
      if (map[static_cast<std::size_t>(r)] < 0) {
        // Only reachable if tolerance broke the dual certificate; use the
        // Hungarian matching itself.
        for (int j = 1; j <= m; ++j) map[static_cast<std::size_t>(d.row_of_col[j] - 1)] = j - 1;
        break;
      }
    }
  }

  Permutation p(std::move(map));
  return {p, scores.inner(p)};
}

Permutation project_to_permutation(const SquareBlock& m) {
  return solve_max_assignment(m).assignment;
}

}  // namespace permsync
