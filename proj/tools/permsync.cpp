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

// permsync: generate problems, run solvers, sweep benchmarks, run suites.
//
// Exit codes: 0 success, 1 failure, 2 vacuous suite, 64 usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "permsync/analysis.hpp"
#include "permsync/benchmark.hpp"
#include "permsync/error.hpp"
#include "permsync/models.hpp"
#include "permsync/problem_io.hpp"
#include "permsync/rng.hpp"
#include "permsync/solvers.hpp"

namespace {

using namespace permsync;

constexpr int kExitFailure = 1;
constexpr int kExitVacuous = 2;
constexpr int kExitUsage = 64;

// Stream used to draw P_crpt for the mixture sampler, separate from the
// instance streams.
constexpr std::uint64_t kCrptStream = 0x637270;

struct ModelFlags {
  std::string model = "uniform";
  std::string sampler = "haar";
  std::optional<std::string> p_crpt;
  ModelConfig cfg;

  void attach(CLI::App* app) {
    app->add_option("--model", model, "uniform | superspreader | lbc | lac")->required();
    app->add_option("--n", cfg.n, "node count")->capture_default_str();
    app->add_option("--m", cfg.m, "permutation size")->capture_default_str();
    app->add_option("--p", cfg.p, "Erdos-Renyi edge probability")->capture_default_str();
    app->add_option("--q", cfg.q, "uniform: corruption probability");
    app->add_option("--epsilon", cfg.epsilon, "superspreader: probability an edge at i0 stays good");
    app->add_option("--i0", cfg.i0, "superspreader: corrupted node");
    app->add_option("--sampler", sampler, "superspreader corruption: haar | lac | mixture")->capture_default_str();
    app->add_option("--mix-prob", cfg.mix_prob, "mixture sampler: probability of the fixed corruption");
    app->add_option("--p-crpt", p_crpt, "mixture sampler: space-separated map (default: drawn from the seed)");
    app->add_option("--nc", cfg.nc, "lbc/lac: corrupted node count");
    app->add_option("--mc", cfg.mc, "lbc/lac: corrupted edges per node");
  }

  ModelConfig resolve(std::uint64_t seed) {
    cfg.model = parse_model(model);
    cfg.sampler = parse_sampler(sampler);
    if (cfg.model == ModelKind::kSuperspreader && cfg.sampler == CorruptionSampler::kMixture) {
      if (p_crpt) {
        std::istringstream in(*p_crpt);
        std::vector<std::int32_t> map;
        for (std::int32_t v; in >> v;) map.push_back(v);
        cfg.p_crpt = Permutation(std::move(map));
      } else {
        SeededRng rng(seed, kCrptStream);
        cfg.p_crpt = sample_haar_permutation(rng, cfg.m);
      }
    }
    cfg.validate();
    return cfg;
  }
};

struct ScheduleFlags {
  int t0 = 5;
  int t_max = 100;

  void attach(CLI::App* app) {
    app->add_option("--t0", t0, "CEMP iterations")->capture_default_str();
    app->add_option("--tmax", t_max, "outer iteration cap")->capture_default_str();
  }
  Schedule resolve() const {
    if (t0 < 0 || t_max < 1) throw InputError("need t0 >= 0 and tmax >= 1");
    return Schedule::defaults(t0, t_max);
  }
};

std::size_t count_bad(const ProblemInstance& inst) { return inst.bad ? inst.bad_edges().size() : 0; }

int cmd_generate(ModelFlags& flags, std::uint64_t seed, const std::string& out) {
  const ModelConfig cfg = flags.resolve(seed);
  SeededRng rng(seed);
  const ProblemInstance inst = generate(cfg, rng);
  write_problem(out, inst);
  std::cout << "n=" << inst.num_nodes() << " m=" << inst.block_size() << " edges=" << inst.graph()->num_edges()
            << " bad_edges=" << count_bad(inst) << "\n";
  return 0;
}

int cmd_solve(const std::string& in, const std::string& algo_tag, const std::optional<std::string>& out,
              const ScheduleFlags& sched) {
  const Algorithm algo = parse_algorithm(algo_tag);
  const Schedule schedule = sched.resolve();
  const ProblemInstance inst = read_problem(in);
  if (!inst.graph()->connected()) throw SolverError("measurement graph is disconnected");

  if (algo == Algorithm::kCempInit) {
    const AffinityMatrix a = cemp_init(inst.meas, schedule);
    if (out) {
      std::ofstream f(*out);
      if (!f) throw InputError("cannot open " + *out);
      write_affinity_csv(f, a);
    } else {
      write_affinity_csv(std::cout, a);
    }
    if (inst.truth) {
      const AffinityMatrix a_star = ground_truth_affinity(inst);
      double worst = 0.0;
      for (std::size_t e = 0; e < a.values().size(); ++e) {
        worst = std::max(worst, std::abs(a.values()[e] - a_star.values()[e]));
      }
      std::printf("algo=cemp-init max_affinity_error=%.6f\n", worst);
    }
    return 0;
  }

  const SolverReport report = run_algorithm(algo, inst.meas, schedule);
  if (out) write_solution(*out, inst.block_size(), report.estimate);
  std::printf("algo=%s iterations=%d converged=%s", std::string(algorithm_name(algo)).c_str(), report.iterations,
              report.converged ? "true" : "false");
  if (inst.truth) {
    std::printf(" error=%.6f", relative_error_all_pairs(report.estimate, *inst.truth).error);
    if (inst.bad && !inst.bad_edges().empty()) {
      std::printf(" bad_edge_error=%.6f", relative_error_bad_edges(inst, report.estimate).error);
    }
  }
  std::printf("\n");
  return 0;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path);
  f << text;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  const SuiteResult r = run_suite(suite, seed);
  for (const std::string& line : r.lines) std::cout << suite << ": " << line << "\n";
  std::cout << suite << ": " << verdict_name(r.verdict) << "\n";
  switch (r.verdict) {
    case Verdict::kPass: return 0;
    case Verdict::kFail: return kExitFailure;
    case Verdict::kVacuous: return kExitVacuous;
  }
  return kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permutation synchronization toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;

  auto* gen = app.add_subcommand("generate", "generate a synthetic problem file");
  ModelFlags gen_model;
  gen_model.attach(gen);
  std::string gen_out;
  gen->add_option("--seed", seed, "master seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output problem file")->required();

  auto* solve = app.add_subcommand("solve", "solve a problem file");
  std::string solve_in;
  std::string solve_algo;
  std::optional<std::string> solve_out;
  ScheduleFlags solve_sched;
  solve->add_option("--in", solve_in, "problem file")->required();
  solve->add_option("--algo", solve_algo, "spectral | ppm | irls-l1 | irls-cauchy-s | irls-cauchy-p | cemp-init | "
                                          "irgcl-init | irgcl-s | irgcl-p")
      ->required();
  solve->add_option("--out", solve_out, "solution file (affinity CSV for cemp-init)");
  solve_sched.attach(solve);

  auto* bench = app.add_subcommand("benchmark", "run a seeded parameter sweep");
  ModelFlags bench_model;
  bench_model.attach(bench);
  ScheduleFlags bench_sched;
  bench_sched.attach(bench);
  std::string algos;
  std::string sweep_param;
  std::string sweep_values;
  int trials = 20;
  int threads = 0;
  bool timing = false;
  std::string bench_out;
  std::optional<std::string> bench_agg;
  bench->add_option("--algos", algos, "comma-separated algorithm tags")->required();
  bench->add_option("--sweep", sweep_param, "swept parameter")->required();
  bench->add_option("--values", sweep_values, "comma-separated sweep values")->required();
  bench->add_option("--trials", trials, "trials per sweep value")->capture_default_str();
  bench->add_option("--seed", seed, "master seed")->capture_default_str();
  bench->add_option("--threads", threads, "worker threads (default: PERMSYNC_THREADS or all cores)");
  bench->add_flag("--timing", timing, "record wall times (makes runtime_ms nondeterministic)");
  bench->add_option("--out", bench_out, "raw CSV")->required();
  bench->add_option("--aggregate", bench_agg, "aggregate CSV (default: <out>.agg.csv)");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  verify->add_option("--suite", suite, "hungarian | prop31 | prop42 | thm52 | ppm-failure | invariants")->required();
  verify->add_option("--seed", seed, "seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_model, seed, gen_out);
    if (*solve) return cmd_solve(solve_in, solve_algo, solve_out, solve_sched);
    if (*bench) {
      BenchmarkConfig cfg;
      cfg.model = bench_model.resolve(seed);
      for (const std::string& tag : split_list(algos)) cfg.algorithms.push_back(parse_algorithm(tag));
      cfg.sweep_param = sweep_param;
      for (const std::string& v : split_list(sweep_values)) {
        std::size_t used = 0;
        double x = 0.0;
        try {
          x = std::stod(v, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != v.size()) throw InputError("bad sweep value '" + v + "'");
        cfg.sweep_values.push_back(x);
      }
      cfg.trials = trials;
      cfg.seed = seed;
      cfg.threads = threads;
      cfg.timing = timing;
      cfg.schedule = bench_sched.resolve();
      cfg.validate();
      const std::vector<BenchmarkRow> rows = run_benchmark(cfg);
      write_text(bench_out, raw_csv(rows));
      write_text(bench_agg.value_or(bench_out + ".agg.csv"), aggregate_csv(rows));
      std::cout << "rows=" << rows.size() << "\n";
      return 0;
    }
    if (*verify) {
      const auto names = suite_names();
      if (std::find(names.begin(), names.end(), suite) == names.end()) {
        throw InputError("unknown suite '" + suite + "'");
      }
      return cmd_verify(suite, seed);
    }
  } catch (const InputError& e) {
    std::cerr << "permsync: " << e.what() << "\n";
    return kExitUsage;
  } catch (const permsync::ParseError& e) {
    std::cerr << "permsync: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "permsync: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
