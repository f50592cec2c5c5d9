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

#include "permsync/problem_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "permsync/error.hpp"

namespace permsync {
namespace {

constexpr std::string_view kMagic = "PSYNC 1";

std::string map_line(const Permutation& p) {
  std::string s;
  for (int r = 0; r < p.size(); ++r) {
    if (r > 0) s.push_back(' ');
    s += std::to_string(p[r]);
  }
  return s;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
  std::string expect(std::string_view what) {
    std::string line;
    if (!next(line)) fail("unexpected end of file, expected " + std::string(what));
    return line;
  }
  int line_no() const { return line_no_; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_no_); }

  // Whitespace-separated non-negative integers.
  std::vector<long> integers(std::string_view line) const {
    std::vector<long> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
      if (line[pos] == ' ') {
        ++pos;
        continue;
      }
      long v = 0;
      const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), v);
      if (ec != std::errc() || (ptr != line.data() + line.size() && *ptr != ' ')) {
        fail("expected integers, got '" + std::string(line) + "'");
      }
      out.push_back(v);
      pos = static_cast<std::size_t>(ptr - line.data());
    }
    return out;
  }

  Permutation permutation(std::string_view line, int m) const {
    const auto values = integers(line);
    if (values.size() != static_cast<std::size_t>(m)) {
      fail("map line has " + std::to_string(values.size()) + " entries, expected " + std::to_string(m));
    }
    std::vector<std::int32_t> map(values.begin(), values.end());
    try {
      return Permutation(std::move(map));
    } catch (const InputError& e) {
      fail(std::string("map line is not a permutation: ") + e.what());
    }
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

std::pair<int, int> read_header(LineReader& r) {
  const std::string magic = r.expect("header");
  if (magic.rfind("PSYNC", 0) == 0 && magic != kMagic) r.fail("unsupported version '" + magic + "'");
  if (magic != kMagic) r.fail("missing 'PSYNC 1' header");
  const auto dims = r.integers(r.expect("'n m' line"));
  if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1) r.fail("expected positive 'n m'");
  return {static_cast<int>(dims[0]), static_cast<int>(dims[1])};
}

template <typename F>
void with_output_file(const std::filesystem::path& path, F&& write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  write(out);
  if (!out) throw InputError("write to '" + path.string() + "' failed");
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

void write_problem(std::ostream& out, const ProblemInstance& inst) {
  inst.validate();
  const Graph& g = *inst.graph();
  out << kMagic << '\n' << g.num_nodes() << ' ' << inst.block_size() << '\n';
  if (inst.truth) {
    out << "TRUTH\n";
    for (const Permutation& p : *inst.truth) out << map_line(p) << '\n';
  }
  out << "EDGES\n";
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    out << i << ' ' << j;
    if (inst.bad) out << ' ' << ((*inst.bad)[static_cast<std::size_t>(e)] ? 1 : 0);
    out << '\n' << map_line(inst.meas.block(e)) << '\n';
  }
}

void write_problem(const std::filesystem::path& path, const ProblemInstance& inst) {
  with_output_file(path, [&](std::ostream& out) { write_problem(out, inst); });
}

ProblemInstance read_problem(std::istream& in) {
  LineReader r(in);
  const auto [n, m] = read_header(r);

  std::optional<std::vector<Permutation>> truth;
  std::string line = r.expect("TRUTH or EDGES");
  if (line == "TRUTH") {
    truth.emplace();
    for (int i = 0; i < n; ++i) truth->push_back(r.permutation(r.expect("truth map line"), m));
    line = r.expect("EDGES");
  }
  if (line != "EDGES") r.fail("expected 'EDGES', got '" + line + "'");

  struct Entry {
    Edge edge;
    Permutation block;
    int flag;
  };
  std::vector<Entry> entries;
  int flagged = 0;
  while (r.next(line)) {
    if (line.empty()) r.fail("empty line in EDGES section");
    const auto head = r.integers(line);
    if (head.size() != 2 && head.size() != 3) r.fail("expected 'i j [b]'");
    if (head[0] >= n || head[1] >= n) r.fail("edge endpoint out of range");
    if (head[0] == head[1]) r.fail("self-loop");
    int flag = -1;
    if (head.size() == 3) {
      if (head[2] != 0 && head[2] != 1) r.fail("bad-edge flag must be 0 or 1");
      flag = static_cast<int>(head[2]);
      ++flagged;
    }
    Permutation x = r.permutation(r.expect("edge map line"), m);
    auto a = static_cast<int>(head[0]);
    auto b = static_cast<int>(head[1]);
    if (a > b) {
      std::swap(a, b);
      x = x.transpose();
    }
    entries.push_back({{a, b}, std::move(x), flag});
  }
  if (flagged != 0 && flagged != static_cast<int>(entries.size())) {
    throw ParseError("bad-edge flags must be given for all edges or none", 0);
  }

  std::vector<Edge> edges;
  for (const Entry& e : entries) edges.push_back(e.edge);
  GraphPtr graph;
  try {
    graph = Graph::make(n, std::move(edges));
  } catch (const InputError& e) {
    throw ParseError(e.what(), 0);
  }
  std::vector<Permutation> blocks(entries.size());
  std::vector<char> bad(entries.size());
  for (Entry& e : entries) {
    const auto id = static_cast<std::size_t>(graph->find(e.edge.i, e.edge.j));
    blocks[id] = std::move(e.block);
    bad[id] = static_cast<char>(e.flag == 1);
  }
  ProblemInstance inst{BlockMeasurement(graph, m, std::move(blocks)), std::move(truth), std::nullopt};
  if (flagged > 0) inst.bad = std::move(bad);
  try {
    inst.validate();
  } catch (const InputError& e) {
    throw ParseError(e.what(), 0);
  }
  return inst;
}

ProblemInstance read_problem(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_problem(in);
}

void write_solution(std::ostream& out, int m, const std::vector<Permutation>& estimate) {
  out << kMagic << '\n' << estimate.size() << ' ' << m << '\n' << "SOLUTION\n";
  for (const Permutation& p : estimate) {
    if (p.size() != m) throw InputError("solution block size mismatch");
    out << map_line(p) << '\n';
  }
}

void write_solution(const std::filesystem::path& path, int m, const std::vector<Permutation>& estimate) {
  with_output_file(path, [&](std::ostream& out) { write_solution(out, m, estimate); });
}

std::vector<Permutation> read_solution(std::istream& in) {
  LineReader r(in);
  const auto [n, m] = read_header(r);
  if (r.expect("SOLUTION") != "SOLUTION") r.fail("expected 'SOLUTION'");
  std::vector<Permutation> out;
  for (int i = 0; i < n; ++i) out.push_back(r.permutation(r.expect("solution map line"), m));
  std::string extra;
  while (r.next(extra)) {
    if (!extra.empty()) r.fail("trailing content after SOLUTION section");
  }
  return out;
}

std::vector<Permutation> read_solution(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_solution(in);
}

void write_affinity_csv(std::ostream& out, const EdgeValues& affinity) {
  out << "i,j,affinity\n";
  const Graph& g = *affinity.graph();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edge(e);
    out << fmt::format("{},{},{:.17g}\n", i, j, affinity[e]);
  }
}

}  // namespace permsync
