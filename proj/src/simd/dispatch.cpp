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

#include <algorithm>
#include <cstdlib>
#include <string>

#include "permsync/error.hpp"
#include "permsync/simd/kernels.hpp"

namespace permsync::simd {
namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(PERMSYNC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(PERMSYNC_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& select() {
  const char* forced = std::getenv("PERMSYNC_SIMD");
  if (forced != nullptr && *forced != '\0' && std::string(forced) != "auto") {
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (isa_name(isa) == forced && cpu_supports(isa)) return table_for(isa);
    }
    // Unknown or unsupported request: fall back to the reference path.
    return scalar::kTable;
  }
  const auto isas = available_isas();
  return table_for(isas.back());
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
    if (cpu_supports(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& table_for(Isa isa) {
  if (!cpu_supports(isa)) {
    throw InputError("SIMD variant not available: " + std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(PERMSYNC_HAVE_AVX2)
    case Isa::kAvx2:
      return avx2::kTable;
#endif
#if defined(PERMSYNC_HAVE_NEON)
    case Isa::kNeon:
      return neon::kTable;
#endif
    default:
      return scalar::kTable;
  }
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace permsync::simd
