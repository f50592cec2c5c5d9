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

#include "permsync/benchmark.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <optional>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "permsync/analysis.hpp"
#include "permsync/error.hpp"
#include "permsync/rng.hpp"
#include "solver_internal.hpp"

namespace permsync {

namespace {

constexpr std::array<Algorithm, 9> kAlgorithms{
    Algorithm::kSpectral,  Algorithm::kPpm,       Algorithm::kIrlsL1, Algorithm::kIrlsCauchyS, Algorithm::kIrlsCauchyP,
    Algorithm::kCempInit, Algorithm::kIrgclInit, Algorithm::kIrgclS, Algorithm::kIrgclP};

constexpr std::array<std::string_view, 4> kUniformParams{"q", "n", "m", "p"};
constexpr std::array<std::string_view, 4> kSuperspreaderParams{"epsilon", "n", "m", "p"};
constexpr std::array<std::string_view, 5> kLocalParams{"nc", "mc", "n", "m", "p"};

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kSpectral: return "spectral";
    case Algorithm::kPpm: return "ppm";
    case Algorithm::kIrlsL1: return "irls-l1";
    case Algorithm::kIrlsCauchyS: return "irls-cauchy-s";
    case Algorithm::kIrlsCauchyP: return "irls-cauchy-p";
    case Algorithm::kCempInit: return "cemp-init";
    case Algorithm::kIrgclInit: return "irgcl-init";
    case Algorithm::kIrgclS: return "irgcl-s";
    case Algorithm::kIrgclP: return "irgcl-p";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view tag) {
  for (Algorithm a : kAlgorithms) {
    if (algorithm_name(a) == tag) return a;
  }
  throw InputError(fmt::format("unknown algorithm '{}'", tag));
}

std::span<const Algorithm> all_algorithms() { return kAlgorithms; }

SolverReport run_algorithm(Algorithm algo, const BlockMeasurement& meas, const Schedule& schedule) {
  switch (algo) {
    case Algorithm::kSpectral: return spectral_solve(meas);
    case Algorithm::kPpm: return ppm_solve(meas, nullptr, schedule.t_max);
    case Algorithm::kIrlsL1: return irls_l1_solve(meas, 1e-8, schedule.t_max);
    case Algorithm::kIrlsCauchyS: return irls_cauchy_solve(meas, WlsVariant::kSpectral, std::nullopt, schedule.t_max);
    case Algorithm::kIrlsCauchyP: return irls_cauchy_solve(meas, WlsVariant::kPower, std::nullopt, schedule.t_max);
    case Algorithm::kIrgclInit: return irgcl_init_solve(meas, schedule);
    case Algorithm::kIrgclS: return irgcl_solve(meas, schedule, WlsVariant::kSpectral);
    case Algorithm::kIrgclP: return irgcl_solve(meas, schedule, WlsVariant::kPower);
    case Algorithm::kCempInit: break;
  }
  throw InputError(fmt::format("'{}' does not produce permutations", algorithm_name(algo)));
}

std::span<const std::string_view> sweep_parameters(ModelKind model) {
  switch (model) {
    case ModelKind::kUniform: return kUniformParams;
    case ModelKind::kSuperspreader: return kSuperspreaderParams;
    case ModelKind::kLbc:
    case ModelKind::kLac: return kLocalParams;
  }
  return {};
}

ModelConfig with_parameter(ModelConfig cfg, std::string_view param, double value) {
  const auto params = sweep_parameters(cfg.model);
  if (std::find(params.begin(), params.end(), param) == params.end()) {
    throw InputError(fmt::format("parameter '{}' does not belong to model '{}'", param, model_name(cfg.model)));
  }
  const auto as_int = [&]() {
    if (value != std::floor(value) || std::abs(value) > 1e9) {
      throw InputError(fmt::format("parameter '{}' needs an integer, got {}", param, value));
    }
    return static_cast<int>(value);
  };
  if (param == "q") cfg.q = value;
  else if (param == "epsilon") cfg.epsilon = value;
  else if (param == "p") cfg.p = value;
  else if (param == "n") cfg.n = as_int();
  else if (param == "m") cfg.m = as_int();
  else if (param == "nc") cfg.nc = as_int();
  else if (param == "mc") cfg.mc = as_int();
  return cfg;
}

void BenchmarkConfig::validate() const {
  if (trials < 1) throw InputError("trials must be at least 1");
  if (algorithms.empty()) throw InputError("no algorithms selected");
  for (Algorithm a : algorithms) {
    if (a == Algorithm::kCempInit) throw InputError("cemp-init produces affinities and cannot be benchmarked");
  }
  if (sweep_values.empty()) throw InputError("empty sweep");
  for (double v : sweep_values) with_parameter(model, sweep_param, v).validate();
  schedule.validate();
  if (threads < 0) throw InputError("threads must be >= 0");
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PERMSYNC_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

// All algorithm rows for one (sweep position, trial) pair; every algorithm
// sees the same instance.
std::vector<BenchmarkRow> run_cell(const BenchmarkConfig& cfg, std::vector<Algorithm> algos, std::size_t sweep,
                                   int trial) {
  const double value = cfg.sweep_values[sweep];
  const ModelConfig model = with_parameter(cfg.model, cfg.sweep_param, value);
  const std::uint64_t seed = derive_seed(cfg.seed, sweep, static_cast<std::uint64_t>(trial));

  std::optional<ProblemInstance> inst;
  try {
    SeededRng rng(seed);
    inst = generate(model, rng);
  } catch (const std::exception&) {
    inst.reset();
  }

  std::vector<BenchmarkRow> rows;
  for (Algorithm a : algos) {
    BenchmarkRow row;
    row.model = std::string(model_name(model.model));
    row.algo = std::string(algorithm_name(a));
    row.sweep_param = cfg.sweep_param;
    row.sweep_value = value;
    row.trial = trial;
    row.seed = seed;
    row.error = std::nan("");
    if (inst) {
      try {
        const detail::Stopwatch clock;
        const SolverReport report = run_algorithm(a, inst->meas, cfg.schedule);
        const double elapsed = clock.elapsed_ms();
        row.error = model_error(model.model, *inst, report.estimate).error;
        row.iterations = report.iterations;
        row.converged = report.converged;
        row.runtime_ms = cfg.timing ? elapsed : 0.0;
      } catch (const std::exception&) {
        row.error = std::nan("");
        row.converged = false;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& cfg) {
  cfg.validate();
  std::vector<Algorithm> algos = cfg.algorithms;
  std::sort(algos.begin(), algos.end(),
            [](Algorithm a, Algorithm b) { return algorithm_name(a) < algorithm_name(b); });
  algos.erase(std::unique(algos.begin(), algos.end()), algos.end());

  const std::size_t cells = cfg.sweep_values.size() * static_cast<std::size_t>(cfg.trials);
  std::vector<std::vector<BenchmarkRow>> results(cells);
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t c = next.fetch_add(1); c < cells; c = next.fetch_add(1)) {
      const std::size_t sweep = c / static_cast<std::size_t>(cfg.trials);
      const int trial = static_cast<int>(c % static_cast<std::size_t>(cfg.trials));
      results[c] = run_cell(cfg, algos, sweep, trial);
    }
  };
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(
      static_cast<std::size_t>(resolve_threads(cfg.threads)), cells));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  // Cell c holds rows in algorithm order; emit algorithm-major.
  std::vector<BenchmarkRow> rows;
  rows.reserve(cells * algos.size());
  for (std::size_t a = 0; a < algos.size(); ++a) {
    for (std::size_t c = 0; c < cells; ++c) rows.push_back(results[c][a]);
  }
  return rows;
}

std::string raw_csv(std::span<const BenchmarkRow> rows) {
  std::string out(kRawCsvHeader);
  out += '\n';
  for (const BenchmarkRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{:.3f}\n", r.model, r.algo, r.sweep_param, r.sweep_value, r.trial,
                       r.seed, r.error, r.iterations, r.converged ? "true" : "false", r.runtime_ms);
  }
  return out;
}

std::string aggregate_csv(std::span<const BenchmarkRow> rows) {
  struct Group {
    const BenchmarkRow* first = nullptr;
    int trials = 0;
    int failures = 0;
    std::vector<double> errors;
    double iterations = 0.0;
  };
  std::vector<Group> groups;
  std::map<std::tuple<std::string, double>, std::size_t> index;
  for (const BenchmarkRow& r : rows) {
    const auto key = std::make_tuple(r.algo, r.sweep_value);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, groups.size()).first;
      groups.emplace_back();
      groups.back().first = &r;
    }
    Group& g = groups[it->second];
    ++g.trials;
    if (std::isnan(r.error)) {
      ++g.failures;
    } else {
      g.errors.push_back(r.error);
      g.iterations += r.iterations;
    }
  }

  std::string out(kAggregateCsvHeader);
  out += '\n';
  for (const Group& g : groups) {
    const double count = static_cast<double>(g.errors.size());
    double mean = std::nan("");
    double sd = std::nan("");
    double iters = std::nan("");
    if (!g.errors.empty()) {
      mean = 0.0;
      for (double e : g.errors) mean += e;
      mean /= count;
      iters = g.iterations / count;
      if (g.errors.size() > 1) {
        double ss = 0.0;
        for (double e : g.errors) ss += (e - mean) * (e - mean);
        sd = std::sqrt(ss / (count - 1.0));
      } else {
        sd = 0.0;
      }
    }
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", g.first->model, g.first->algo, g.first->sweep_param,
                       g.first->sweep_value, g.trials, g.failures, mean, sd, iters);
  }
  return out;
}

}  // namespace permsync
