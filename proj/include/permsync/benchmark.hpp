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
#include <string_view>
#include <vector>

#include "permsync/graph.hpp"
#include "permsync/models.hpp"
#include "permsync/solvers.hpp"

namespace permsync {

enum class Algorithm { kSpectral, kPpm, kIrlsL1, kIrlsCauchyS, kIrlsCauchyP, kCempInit, kIrgclInit, kIrgclS, kIrgclP };

std::string_view algorithm_name(Algorithm a);
/// Throws InputError on an unknown tag.
Algorithm parse_algorithm(std::string_view tag);
std::span<const Algorithm> all_algorithms();

/// Runs a permutation-producing algorithm. Throws InputError for cemp-init,
/// which produces affinities rather than permutations.
SolverReport run_algorithm(Algorithm algo, const BlockMeasurement& meas, const Schedule& schedule);

/// Sweepable parameters of a model ("q", "epsilon", "nc", ... plus the shared
/// "n", "m" and "p").
std::span<const std::string_view> sweep_parameters(ModelKind model);

/// Copy of cfg with the named parameter set. Integer parameters must receive
/// integral values. Throws InputError when the parameter does not belong to
/// the model.
ModelConfig with_parameter(ModelConfig cfg, std::string_view param, double value);

struct BenchmarkConfig {
  ModelConfig model;
  std::vector<Algorithm> algorithms;
  std::string sweep_param;
  std::vector<double> sweep_values;
  int trials = 20;
  std::uint64_t seed = 0;
  int threads = 0;       // 0: PERMSYNC_THREADS, else the hardware concurrency
  bool timing = false;   // wall times are recorded only on request so output stays reproducible
  Schedule schedule = Schedule::defaults();

  void validate() const;
};

struct BenchmarkRow {
  std::string model;
  std::string algo;
  std::string sweep_param;
  double sweep_value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double error = 0.0;  // NaN when generation or the solver failed
  int iterations = 0;
  bool converged = false;
  double runtime_ms = 0.0;
};

/// One row per (algorithm, sweep value, trial), sorted by algorithm tag,
/// then sweep position, then trial. Trial k at sweep position s uses the
/// instance seed derive_seed(seed, s, k) for every algorithm.
std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& cfg);

/// Worker count: explicit request, else PERMSYNC_THREADS, else hardware.
int resolve_threads(int requested);

inline constexpr std::string_view kRawCsvHeader =
    "model,algo,sweep_param,sweep_value,trial,seed,error,iterations,converged,runtime_ms";
inline constexpr std::string_view kAggregateCsvHeader =
    "model,algo,sweep_param,sweep_value,trials,failures,mean_error,std_error,mean_iterations";

std::string raw_csv(std::span<const BenchmarkRow> rows);

/// Mean and sample standard deviation of the finite errors per (algorithm,
/// sweep value), in row order. Failed trials are counted, not averaged.
std::string aggregate_csv(std::span<const BenchmarkRow> rows);

}  // namespace permsync
