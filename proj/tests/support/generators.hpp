// Copyright 2026 The leanplan Authors
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

// Hand-rolled generators and independent oracles shared by the unit and
// acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "leanplan/memory.hpp"
#include "leanplan/plan_codec.hpp"
#include "leanplan/scene.hpp"

namespace leanplan::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  bool coin(double p = 0.5) { return unit() < p; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(range(0, static_cast<int>(v.size()) - 1))];
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Random occupancy grid with the given blocked-cell density.
inline GridMap random_grid(Gen& g, int w, int h, double density) {
  GridMap grid(w, h, 0.1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) grid.set_blocked({x, y}, g.coin(density));
  }
  return grid;
}

inline Cell random_free_cell(Gen& g, const GridMap& grid) {
  for (int tries = 0; tries < 10000; ++tries) {
    Cell c{g.range(0, grid.width() - 1), g.range(0, grid.height() - 1)};
    if (grid.free(c)) return c;
  }
  return {0, 0};
}

/// Breadth-first search step counts, written independently of the library's
/// Dijkstra. -1 marks unreachable cells.
inline std::vector<long> bfs_steps(const GridMap& grid, Cell src) {
  std::vector<long> d(grid.cell_count(), -1);
  if (!grid.free(src)) return d;
  std::deque<Cell> q{src};
  d[grid.index(src)] = 0;
  const int dx[] = {0, 1, 0, -1};
  const int dy[] = {-1, 0, 1, 0};
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop_front();
    for (int k = 0; k < 4; ++k) {
      const Cell n{c.x + dx[k], c.y + dy[k]};
      if (!grid.free(n) || d[grid.index(n)] >= 0) continue;
      d[grid.index(n)] = d[grid.index(c)] + 1;
      q.push_back(n);
    }
  }
  return d;
}

/// Brute-force cosine argmax over every candidate, ties (within 1e-9) to
/// the lowest id; nothing when empty or below \p threshold.
inline std::optional<std::size_t> brute_argmax(const std::vector<double>& q,
                                               const std::vector<std::vector<double>>& cands,
                                               const std::vector<int>& ids, double threshold) {
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  std::vector<double> sims;
  for (const auto& c : cands) {
    double dot = 0.0;
    for (std::size_t k = 0; k < q.size() && k < c.size(); ++k) dot += q[k] * c[k];
    const double d = norm(q) * norm(c);
    sims.push_back(d == 0.0 ? 0.0 : dot / d);
  }
  if (sims.empty()) return std::nullopt;
  double top = sims[0];
  for (double s : sims) top = std::max(top, s);
  if (top < threshold) return std::nullopt;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < sims.size(); ++i) {
    if (top - sims[i] <= 1e-9 && (!best || ids[i] < ids[*best])) best = i;
  }
  return best;
}

inline std::string read_fixture(const std::string& name) {
  std::ifstream f(std::string(LEANPLAN_FIXTURES_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::vector<std::string> fixture_lines(const std::string& name) {
  std::istringstream in(read_fixture(name));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

/// The "your answer:" JSON part of a prompt example fixture.
inline std::string example_answer(const std::string& fixture) {
  const std::string text = read_fixture(fixture);
  const auto at = text.find("your answer:");
  return at == std::string::npos ? text : text.substr(at + 12);
}

/// The "#feedback: ..." stimulus line of a prompt example fixture, if any.
inline std::optional<std::string> example_feedback(const std::string& fixture) {
  std::istringstream in(read_fixture(fixture));
  std::string line;
  while (std::getline(in, line)) {
    const auto at = line.find("#feedback:");
    if (at != std::string::npos) return line.substr(at);
  }
  return std::nullopt;
}

inline const std::vector<std::string>& words() {
  static const std::vector<std::string> w = {
      "apple", "banana", "lemon", "plum", "strawberry", "coke", "pepsi", "sprite", "tea", "box",
      "toy", "duck", "rabbit", "shark", "squirrel", "red", "yellow", "green", "fruit", "table",
      "drink", "storage", "rack", "shipping", "place", "find", "the", "on", "side", "close"};
  return w;
}

inline std::string random_phrase(Gen& g, int min_words, int max_words) {
  std::string s;
  const int n = g.range(min_words, max_words);
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += g.pick(words());
  }
  return s;
}

}  // namespace leanplan::testing
