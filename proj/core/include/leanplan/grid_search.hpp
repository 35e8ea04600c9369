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

#include <cstdint>
#include <vector>

#include "leanplan/scene.hpp"

namespace leanplan {

struct GridPath {
  std::vector<Cell> cells;  // from start to goal, inclusive
  double length = 0.0;      // meters: (cells - 1) * resolution
};

/// Single-source Dijkstra over the 4-connected free cells of a grid with
/// uniform edge cost equal to the grid resolution.
class DistanceField {
 public:
  DistanceField(const GridMap& grid, Cell source);

  bool reachable(Cell c) const;
  /// Number of moves from the source; -1 if unreachable.
  std::int64_t steps(Cell c) const;
  double meters(Cell c) const;
  /// Throws Error(kUnreachable) if \p goal cannot be reached.
  GridPath path_to(Cell goal) const;
  Cell source() const { return source_; }

 private:
  const GridMap* grid_;
  Cell source_;
  std::vector<std::int64_t> dist_;
  std::vector<std::int64_t> parent_;
};

DistanceField distance_field(const GridMap& grid, Cell source);

/// Shortest 4-connected path. Ties are broken by expanding neighbors in the
/// order up, right, down, left. Throws Error(kUnreachable).
GridPath shortest_path(const GridMap& grid, Cell from, Cell to);

}  // namespace leanplan
