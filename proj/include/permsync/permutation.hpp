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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace permsync {

/// A permutation of {0, ..., m-1} in one-line notation.
///
/// `map()[r] == c` means the matrix representation has a one at row r and
/// column c. Matrix products therefore compose right to left on the maps:
/// (P Q)[r] = Q[P[r]].
class Permutation {
 public:
  Permutation() = default;

  /// Throws InputError unless `map` is a bijection of {0, ..., size-1}.
  explicit Permutation(std::vector<std::int32_t> map);

  static Permutation identity(int m);

  int size() const { return static_cast<int>(map_.size()); }
  std::int32_t operator[](int row) const { return map_[static_cast<std::size_t>(row)]; }
  std::span<const std::int32_t> map() const { return map_; }
  const std::int32_t* data() const { return map_.data(); }

  /// Matrix transpose, which is also the group inverse.
  Permutation transpose() const;

  bool is_identity() const;

  /// Number of rows where the two maps agree; equals the Frobenius inner
  /// product of the matrix forms.
  int agreement(const Permutation& other) const;

  /// Row-major dense 0/1 matrix.
  std::vector<double> dense() const;

  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::int32_t> map_;
};

/// Matrix product P Q. Throws InputError on size mismatch.
Permutation compose(const Permutation& p, const Permutation& q);

/// <P, Q> / m, in [0, 1]. Equals 1 iff P == Q.
double correlation_affinity(const Permutation& p, const Permutation& q);

/// Squared Frobenius distance ||P - Q||_F^2 = 2 (m - <P, Q>).
int squared_distance(const Permutation& p, const Permutation& q);

/// Dense m x m real block (row-major).
class SquareBlock {
 public:
  SquareBlock() = default;
  explicit SquareBlock(int m) : m_(m), values_(static_cast<std::size_t>(m) * m, 0.0) {}
  SquareBlock(int m, std::vector<double> values);

  static SquareBlock from_permutation(const Permutation& p, double scale = 1.0);

  int size() const { return m_; }
  double& operator()(int r, int c) { return values_[static_cast<std::size_t>(r) * m_ + c]; }
  double operator()(int r, int c) const { return values_[static_cast<std::size_t>(r) * m_ + c]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// this += scale * P
  void add_permutation(const Permutation& p, double scale);

  /// Frobenius inner product with a permutation matrix.
  double inner(const Permutation& p) const;

  SquareBlock& operator*=(double s);
  SquareBlock& operator+=(const SquareBlock& other);

  bool all_finite() const;

 private:
  int m_ = 0;
  std::vector<double> values_;
};

/// B X for a permutation X (column permutation of B).
SquareBlock multiply(const SquareBlock& b, const Permutation& x);

}  // namespace permsync
