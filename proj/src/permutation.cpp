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

#include "permsync/permutation.hpp"

#include <cmath>
#include <numeric>

#include "permsync/error.hpp"
#include "permsync/simd/kernels.hpp"

namespace permsync {

Permutation::Permutation(std::vector<std::int32_t> map) : map_(std::move(map)) {
  if (map_.empty()) throw InputError("permutation must have size >= 1");
  std::vector<char> seen(map_.size(), 0);
  for (std::int32_t c : map_) {
    if (c < 0 || static_cast<std::size_t>(c) >= map_.size() || seen[static_cast<std::size_t>(c)]) {
      throw InputError("map is not a bijection: " + to_string());
    }
    seen[static_cast<std::size_t>(c)] = 1;
  }
}

Permutation Permutation::identity(int m) {
  if (m < 1) throw InputError("permutation must have size >= 1");
  std::vector<std::int32_t> map(static_cast<std::size_t>(m));
  std::iota(map.begin(), map.end(), 0);
  return Permutation(std::move(map));
}

Permutation Permutation::transpose() const {
  std::vector<std::int32_t> inv(map_.size());
  for (std::size_t r = 0; r < map_.size(); ++r) inv[static_cast<std::size_t>(map_[r])] = static_cast<std::int32_t>(r);
  Permutation out;
  out.map_ = std::move(inv);
  return out;
}

bool Permutation::is_identity() const {
  for (std::size_t r = 0; r < map_.size(); ++r) {
    if (map_[r] != static_cast<std::int32_t>(r)) return false;
  }
  return true;
}

int Permutation::agreement(const Permutation& other) const {
  if (other.size() != size()) throw InputError("permutation size mismatch");
  return simd::count_equal(map_.data(), other.map_.data(), map_.size());
}

std::vector<double> Permutation::dense() const {
  const std::size_t m = map_.size();
  std::vector<double> out(m * m, 0.0);
  for (std::size_t r = 0; r < m; ++r) out[r * m + static_cast<std::size_t>(map_[r])] = 1.0;
  return out;
}

std::string Permutation::to_string() const {
  std::string s;
  for (std::size_t r = 0; r < map_.size(); ++r) {
    if (r) s += ' ';
    s += std::to_string(map_[r]);
  }
  return s;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) throw InputError("compose: permutation size mismatch");
  std::vector<std::int32_t> map(static_cast<std::size_t>(p.size()));
  for (int r = 0; r < p.size(); ++r) map[static_cast<std::size_t>(r)] = q[p[r]];
  return Permutation(std::move(map));
}

double correlation_affinity(const Permutation& p, const Permutation& q) {
  return static_cast<double>(p.agreement(q)) / p.size();
}

int squared_distance(const Permutation& p, const Permutation& q) {
  return 2 * (p.size() - p.agreement(q));
}

SquareBlock::SquareBlock(int m, std::vector<double> values) : m_(m), values_(std::move(values)) {
  if (m < 0 || values_.size() != static_cast<std::size_t>(m) * m) {
    throw InputError("square block: value count does not match m*m");
  }
}

SquareBlock SquareBlock::from_permutation(const Permutation& p, double scale) {
  SquareBlock b(p.size());
  b.add_permutation(p, scale);
  return b;
}

void SquareBlock::add_permutation(const Permutation& p, double scale) {
  if (p.size() != m_) throw InputError("square block: permutation size mismatch");
  for (int r = 0; r < m_; ++r) (*this)(r, p[r]) += scale;
}

double SquareBlock::inner(const Permutation& p) const {
  if (p.size() != m_) throw InputError("square block: permutation size mismatch");
  double s = 0.0;
  for (int r = 0; r < m_; ++r) s += (*this)(r, p[r]);
  return s;
}

SquareBlock& SquareBlock::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

SquareBlock& SquareBlock::operator+=(const SquareBlock& other) {
  if (other.m_ != m_) throw InputError("square block: size mismatch");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

bool SquareBlock::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

SquareBlock multiply(const SquareBlock& b, const Permutation& x) {
  if (b.size() != x.size()) throw InputError("multiply: size mismatch");
  const int m = b.size();
  SquareBlock out(m);
  for (int r = 0; r < m; ++r) {
    for (int s = 0; s < m; ++s) out(r, x[s]) = b(r, s);
  }
  return out;
}

}  // namespace permsync
