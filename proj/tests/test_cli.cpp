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

// End-to-end checks of the command-line tool through a shell.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PERMSYNC_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("permsync_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(Cli, GenerateThenSolve) {
  const auto gen = run("generate --model lac --n 40 --m 6 --nc 2 --mc 20 --seed 4 --out " + path("p.txt"));
  ASSERT_EQ(gen.code, 0);
  EXPECT_NE(gen.out.find("n=40 m=6 edges=780"), std::string::npos) << gen.out;
  const auto solve = run("solve --in " + path("p.txt") + " --algo irgcl-p --out " + path("s.txt"));
  ASSERT_EQ(solve.code, 0);
  EXPECT_NE(solve.out.find("algo=irgcl-p"), std::string::npos);
  EXPECT_NE(solve.out.find("bad_edge_error=0.000000"), std::string::npos) << solve.out;
  EXPECT_EQ(slurp(path("s.txt")).rfind("PSYNC 1\n", 0), 0u);
}

TEST_F(Cli, CempInitWritesAffinities) {
  ASSERT_EQ(run("generate --model uniform --n 12 --m 4 --q 0.2 --seed 1 --out " + path("p.txt")).code, 0);
  const auto r = run("solve --in " + path("p.txt") + " --algo cemp-init --out " + path("a.csv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("max_affinity_error="), std::string::npos);
  EXPECT_EQ(slurp(path("a.csv")).rfind("i,j,affinity\n", 0), 0u);
}

TEST_F(Cli, BenchmarkWritesBothCsvs) {
  const auto r = run("benchmark --model uniform --n 20 --m 4 --algos spectral,ppm --sweep q --values 0.1,0.2 "
                     "--trials 2 --seed 3 --threads 2 --out " + path("raw.csv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rows=8"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("raw.csv.agg.csv")));
}

TEST_F(Cli, VerifyExitCodes) {
  const auto ok = run("verify --suite invariants --seed 1");
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("invariants: PASS"), std::string::npos);
  EXPECT_EQ(run("verify --suite nonsense").code, 64);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 64);
  EXPECT_EQ(run("generate --model uniform").code, 64);            // missing --out
  EXPECT_EQ(run("generate --model bogus --out " + path("x")).code, 64);
  EXPECT_EQ(run("solve --in " + path("missing.txt") + " --algo spectral").code, 64);
  std::ofstream(path("bad.txt")) << "PSYNC 1\n3 3\nEDGES\n0 1\n0 0 1\n";
  EXPECT_EQ(run("solve --in " + path("bad.txt") + " --algo spectral").code, 64);
  EXPECT_EQ(run("benchmark --model lac --algos cemp-init --sweep nc --values 1 --out " + path("r.csv")).code, 64);
}

TEST_F(Cli, DisconnectedGraphFails) {
  std::ofstream(path("d.txt")) << "PSYNC 1\n4 2\nEDGES\n0 1\n0 1\n2 3\n1 0\n";
  EXPECT_EQ(run("solve --in " + path("d.txt") + " --algo spectral").code, 1);
}

}  // namespace
