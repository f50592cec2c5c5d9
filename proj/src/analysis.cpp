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

#include "permsync/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "permsync/error.hpp"

namespace permsync {

namespace {

void check_estimate(const std::vector<Permutation>& estimate, const std::vector<Permutation>& truth) {
  if (estimate.size() != truth.size()) throw InputError("relative_error: estimate and truth sizes differ");
  if (truth.empty()) throw InputError("relative_error: empty truth");
  const int m = truth.front().size();
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (estimate[i].size() != m || truth[i].size() != m) throw InputError("relative_error: block size mismatch");
  }
}

}  // namespace

ErrorReport relative_error(const std::vector<Permutation>& estimate, const std::vector<Permutation>& truth,
                           std::span<const std::pair<int, int>> pairs, EdgeSet tag) {
  check_estimate(estimate, truth);
  if (pairs.empty()) throw InputError("relative_error: empty edge set");
  const int n = static_cast<int>(truth.size());
  const int m = truth.front().size();
  ErrorReport out;
  out.edge_set = tag;
  out.pairs = pairs.size();
  out.histogram.assign(static_cast<std::size_t>(m) + 1, 0);
  // ||X^ - X*||_F^2 = 2 (m - <X^, X*>), so the sum stays an exact integer.
  std::uint64_t squared = 0;
  for (const auto& [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw InputError("relative_error: invalid pair");
    const auto iu = static_cast<std::size_t>(i);
    const auto ju = static_cast<std::size_t>(j);
    const int agree = relative(estimate[iu], estimate[ju]).agreement(relative(truth[iu], truth[ju]));
    const int disagree = m - agree;
    ++out.histogram[static_cast<std::size_t>(disagree)];
    squared += 2 * static_cast<std::uint64_t>(disagree);
  }
  out.error = static_cast<double>(squared) / (static_cast<double>(m) * static_cast<double>(pairs.size()));
  return out;
}

ErrorReport relative_error_all_pairs(const std::vector<Permutation>& estimate,
                                     const std::vector<Permutation>& truth) {
  const int n = static_cast<int>(truth.size());
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(std::max(n - 1, 0)) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return relative_error(estimate, truth, pairs, EdgeSet::kAllPairs);
}

ErrorReport relative_error_bad_edges(const ProblemInstance& inst, const std::vector<Permutation>& estimate) {
  if (!inst.truth) throw InputError("relative_error: instance has no truth");
  const std::vector<EdgeId> bad = inst.bad_edges();
  if (bad.empty()) return relative_error_all_pairs(estimate, *inst.truth);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(bad.size());
  for (EdgeId e : bad) {
    const Edge& edge = inst.graph()->edge(e);
    pairs.emplace_back(edge.i, edge.j);
  }
  return relative_error(estimate, *inst.truth, pairs, EdgeSet::kBadEdges);
}

ErrorReport model_error(ModelKind model, const ProblemInstance& inst, const std::vector<Permutation>& estimate) {
  if (!inst.truth) throw InputError("model_error: instance has no truth");
  if (model == ModelKind::kUniform) return relative_error_all_pairs(estimate, *inst.truth);
  return relative_error_bad_edges(inst, estimate);
}

AffinityMatrix ground_truth_affinity(const ProblemInstance& inst) {
  if (!inst.truth) throw InputError("ground_truth_affinity: instance has no truth");
  const Graph& g = *inst.graph();
  const auto& truth = *inst.truth;
  std::vector<double> a(static_cast<std::size_t>(g.num_edges()));
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    a[static_cast<std::size_t>(e)] = correlation_affinity(
        inst.meas.block(e), relative(truth[static_cast<std::size_t>(i)], truth[static_cast<std::size_t>(j)]));
  }
  return AffinityMatrix(inst.graph(), std::move(a));
}

namespace {

// A walk i, k_1, ..., k_{l-1}, j through the edge ij: the ids of the l edges
// it traverses and the cycle inconsistency d_L of the cycle closed by ji.
struct Walk {
  std::vector<EdgeId> edges;
  double inconsistency = 0.0;
};

class WalkEnumerator {
 public:
  WalkEnumerator(const BlockMeasurement& meas, std::size_t budget) : meas_(meas), budget_(budget) {}

  std::vector<Walk> through(EdgeId e, int power) {
    const auto [i, j] = meas_.graph()->edge(e);
    target_ = j;
    xij_ = &meas_.block(e);
    walks_.clear();
    path_.clear();
    extend(i, power, Permutation::identity(meas_.block_size()));
    return std::move(walks_);
  }

 private:
  void extend(int node, int remaining, const Permutation& product) {
    const Graph& g = *meas_.graph();
    for (int k : g.neighbors(node)) {
      if (remaining == 1 && k != target_) continue;
      const Permutation next = compose(product, meas_.block(node, k));
      path_.push_back(g.find(node, k));
      if (remaining == 1) {
        if (budget_ == 0) throw InputError("cemp oracle: walk enumeration cap exceeded");
        --budget_;
        // d_L = ||prod X~_ji - I||^2 / (2m) = 1 - <prod, X~_ij> / m
        const double m = xij_->size();
        walks_.push_back({path_, 1.0 - next.agreement(*xij_) / m});
      } else {
        extend(k, remaining - 1, next);
      }
      path_.pop_back();
    }
  }

  const BlockMeasurement& meas_;
  std::size_t budget_;
  int target_ = 0;
  const Permutation* xij_ = nullptr;
  std::vector<EdgeId> path_;
  std::vector<Walk> walks_;
};

}  // namespace

AffinityMatrix cemp_message_passing_oracle(const BlockMeasurement& meas, const Schedule& schedule, int power,
                                           double fallback, std::size_t max_walks) {
  if (power < 2) throw InputError("cemp oracle: cycle power must be >= 2");
  const Graph& g = *meas.graph();
  const auto num_edges = static_cast<std::size_t>(g.num_edges());

  WalkEnumerator enumerate(meas, max_walks);
  std::vector<std::vector<Walk>> walks(num_edges);
  for (EdgeId e = 0; e < g.num_edges(); ++e) walks[static_cast<std::size_t>(e)] = enumerate.through(e, power);

  std::vector<double> s(num_edges, 1.0 - fallback);
  for (std::size_t e = 0; e < num_edges; ++e) {
    if (walks[e].empty()) continue;
    double sum = 0.0;
    for (const Walk& w : walks[e]) sum += w.inconsistency;
    s[e] = sum / static_cast<double>(walks[e].size());
  }
  for (int t = 0; t < schedule.t0; ++t) {
    const double beta = schedule.beta(t);
    std::vector<double> next(num_edges, 1.0 - fallback);
    for (std::size_t e = 0; e < num_edges; ++e) {
      if (walks[e].empty()) continue;
      double num = 0.0;
      double den = 0.0;
      for (const Walk& w : walks[e]) {
        double weight = 1.0;
        for (EdgeId f : w.edges) weight *= std::exp(-beta * s[static_cast<std::size_t>(f)]);
        num += weight * w.inconsistency;
        den += weight;
      }
      if (den > 0.0) next[e] = num / den;
    }
    s = std::move(next);
  }
  std::vector<double> a(num_edges);
  for (std::size_t e = 0; e < num_edges; ++e) a[e] = 1.0 - s[e];
  return AffinityMatrix(meas.graph(), std::move(a));
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kVacuous: return "VACUOUS";
  }
  return "?";
}

CycleStats cycle_stats(const ProblemInstance& inst) {
  if (!inst.bad) throw InputError("cycle_stats: bad-edge flags required");
  const Graph& g = *inst.graph();
  const std::vector<char>& bad = *inst.bad;
  CycleStats out;
  out.common.resize(static_cast<std::size_t>(g.num_edges()));
  out.good.resize(out.common.size());
  out.bad.resize(out.common.size());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    const std::vector<int> common = g.common_neighbors(i, j);
    int good = 0;
    for (int k : common) {
      if (!bad[static_cast<std::size_t>(g.find(i, k))] && !bad[static_cast<std::size_t>(g.find(k, j))]) ++good;
    }
    const auto idx = static_cast<std::size_t>(e);
    out.common[idx] = static_cast<int>(common.size());
    out.good[idx] = good;
    out.bad[idx] = out.common[idx] - good;
  }
  return out;
}

std::pair<Permutation, double> brute_force_assignment(const SquareBlock& scores) {
  const int m = scores.size();
  if (m < 1 || m > 10) throw InputError("brute_force_assignment: size must lie in [1, 10]");
  std::vector<std::int32_t> map(static_cast<std::size_t>(m));
  std::iota(map.begin(), map.end(), 0);
  std::vector<std::int32_t> best = map;
  double best_score = -INFINITY;
  // next_permutation visits maps in lexicographic order, so keeping only
  // strict improvements returns the smallest maximizer.
  do {
    double score = 0.0;
    for (int r = 0; r < m; ++r) score += scores(r, map[static_cast<std::size_t>(r)]);
    if (score > best_score) {
      best_score = score;
      best = map;
    }
  } while (std::next_permutation(map.begin(), map.end()));
  return {Permutation(std::move(best)), best_score};
}

}  // namespace permsync
