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

#include "permsync/eigensolver.hpp"

#include <lapack.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "permsync/error.hpp"

// Unblocked LAPACK routines without LAPACKE wrappers. Blocked variants call
// DGEMM, and some optimized BLAS builds ship faulty DGEMM kernels for recent
// CPUs; the level-2 path is both immune and fast enough at the sizes used
// here (about 0.2 s for a 1000 x 1000 matrix).
extern "C" {
void dsytd2_(const char* uplo, const lapack_int* n, double* a, const lapack_int* lda, double* d, double* e,
             double* tau, lapack_int* info, std::size_t uplo_len);
void dorm2r_(const char* side, const char* trans, const lapack_int* m, const lapack_int* n, const lapack_int* k,
             const double* a, const lapack_int* lda, const double* tau, double* c, const lapack_int* ldc,
             double* work, lapack_int* info, std::size_t side_len, std::size_t trans_len);
}

namespace permsync {

namespace {

void check_info(lapack_int info, const char* routine) {
  if (info != 0) throw SolverError(std::string("eigensolver: ") + routine + " failed with info " + std::to_string(info));
}

// Eigenpairs il..iu (1-based, ascending) of the tridiagonal matrix (d, e).
void tridiagonal_pairs(lapack_int n, std::vector<double>& d, std::vector<double>& e, lapack_int il, lapack_int iu,
                       std::vector<double>& w, std::vector<double>& z, lapack_int& found) {
  const lapack_int count = iu - il + 1;
  const double vl = 0.0;
  const double vu = 0.0;
  lapack_int ldz = n;
  lapack_int nzc = count;
  lapack_int tryrac = 1;
  lapack_int info = 0;
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(count));
  double work_query = 0.0;
  lapack_int iwork_query = 0;
  lapack_int lwork = -1;
  lapack_int liwork = -1;
  LAPACK_dstemr("V", "I", &n, d.data(), e.data(), &vl, &vu, &il, &iu, &found, w.data(), z.data(), &ldz, &nzc,
                isuppz.data(), &tryrac, &work_query, &lwork, &iwork_query, &liwork, &info);
  check_info(info, "dstemr workspace query");
  lwork = static_cast<lapack_int>(work_query);
  liwork = iwork_query;
  std::vector<double> work(static_cast<std::size_t>(lwork));
  std::vector<lapack_int> iwork(static_cast<std::size_t>(liwork));
  LAPACK_dstemr("V", "I", &n, d.data(), e.data(), &vl, &vu, &il, &iu, &found, w.data(), z.data(), &ldz, &nzc,
                isuppz.data(), &tryrac, work.data(), &lwork, iwork.data(), &liwork, &info);
  check_info(info, "dstemr");
}

}  // namespace

EigenPairs top_eigenpairs(std::vector<double> a, int dim, int count) {
  if (dim < 1 || count < 1 || count > dim) throw InputError("eigensolver: bad dimensions");
  if (a.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
    throw InputError("eigensolver: matrix size mismatch");
  }
  const std::size_t udim = static_cast<std::size_t>(dim);
  // Mirror the upper triangle so the residual check sees the same matrix
  // the reduction reads. Row-major upper is column-major lower.
  double scale = 0.0;
  for (std::size_t r = 0; r < udim; ++r) {
    for (std::size_t c = r; c < udim; ++c) {
      a[c * udim + r] = a[r * udim + c];
      scale = std::max(scale, std::abs(a[r * udim + c]));
    }
  }
  const std::vector<double> original = a;

  lapack_int n = dim;
  lapack_int info = 0;
  std::vector<double> d(udim);
  std::vector<double> e(udim);
  std::vector<double> tau(udim);
  dsytd2_("L", &n, a.data(), &n, d.data(), e.data(), tau.data(), &info, 1);
  check_info(info, "dsytd2");

  std::vector<double> w(udim);
  std::vector<double> z(udim * static_cast<std::size_t>(count));
  lapack_int found = 0;
  tridiagonal_pairs(n, d, e, dim - count + 1, dim, w, z, found);
  if (found != count) throw SolverError("eigensolver: dstemr returned too few eigenpairs");

  // Z <- Q Z with Q = H(1) ... H(n-1), stored below the subdiagonal.
  if (dim > 1) {
    lapack_int rows = dim - 1;
    lapack_int cols = count;
    std::vector<double> work(static_cast<std::size_t>(count));
    dorm2r_("L", "N", &rows, &cols, &rows, a.data() + 1, &n, tau.data(), z.data() + 1, &n, work.data(), &info, 1,
            1);
    check_info(info, "dorm2r");
  }

  EigenPairs out;
  out.dim = dim;
  out.count = count;
  out.values.resize(static_cast<std::size_t>(count));
  out.vectors.resize(z.size());
  const double tolerance = 1e-8 * std::max(scale, 1e-300) * dim;
  for (int k = 0; k < count; ++k) {
    const int src = count - 1 - k;
    const double lambda = w[static_cast<std::size_t>(src)];
    out.values[static_cast<std::size_t>(k)] = lambda;
    const double* col = z.data() + static_cast<std::size_t>(src) * udim;
    double* dst = out.vectors.data() + static_cast<std::size_t>(k) * udim;

    double residual = 0.0;
    for (std::size_t r = 0; r < udim; ++r) {
      const double* row = original.data() + r * udim;  // symmetric, so row r is column r
      double acc = 0.0;
      for (std::size_t c = 0; c < udim; ++c) acc += row[c] * col[c];
      residual = std::max(residual, std::abs(acc - lambda * col[r]));
    }
    if (!(residual <= tolerance)) {
      throw SolverError("eigensolver: eigenpair residual " + std::to_string(residual) + " exceeds tolerance");
    }

    double largest = 0.0;
    for (std::size_t r = 0; r < udim; ++r) largest = std::max(largest, std::abs(col[r]));
    double sign = 1.0;
    for (std::size_t r = 0; r < udim; ++r) {
      if (std::abs(col[r]) > 1e-10 * largest) {
        sign = col[r] > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t r = 0; r < udim; ++r) dst[r] = sign * col[r];
  }
  return out;
}

}  // namespace permsync
