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
#include "leanplan/grid_search.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <tuple>

#include "leanplan/error.hpp"

namespace leanplan {

namespace {

constexpr Direction kExpansionOrder[] = {Direction::kUp, Direction::kRight, Direction::kDown,
                                         Direction::kLeft};

std::string describe(Cell c) {
  return "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ")";
}

}  // namespace

DistanceField::DistanceField(const GridMap& grid, Cell source) : grid_(&grid), source_(source) {
  dist_.assign(grid.cell_count(), -1);
  parent_.assign(grid.cell_count(), -1);
  if (!grid.free(source)) return;

  // (distance, insertion sequence, cell index): the sequence keeps pops in
  // FIFO order among equal distances, so expansion order decides ties.
  using Entry = std::tuple<std::int64_t, std::uint64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t seq = 0;
  dist_[grid.index(source)] = 0;
  open.emplace(0, seq++, grid.index(source));
  while (!open.empty()) {
    auto [d, unused, idx] = open.top();
    open.pop();
    (void)unused;
    if (d != dist_[idx]) continue;
    const Cell here = grid.cell_at(idx);
    for (Direction dir : kExpansionOrder) {
      const Cell next = step(here, dir);
      if (!grid.free(next)) continue;
      const std::size_t nidx = grid.index(next);
      if (dist_[nidx] < 0 || d + 1 < dist_[nidx]) {
        dist_[nidx] = d + 1;
        parent_[nidx] = static_cast<std::int64_t>(idx);
        open.emplace(d + 1, seq++, nidx);
      }
    }
  }
}

bool DistanceField::reachable(Cell c) const {
  return grid_->in_bounds(c) && dist_[grid_->index(c)] >= 0;
}

std::int64_t DistanceField::steps(Cell c) const {
  return grid_->in_bounds(c) ? dist_[grid_->index(c)] : -1;
}

double DistanceField::meters(Cell c) const {
  return static_cast<double>(steps(c)) * grid_->resolution();
}

GridPath DistanceField::path_to(Cell goal) const {
  if (!reachable(goal)) {
    throw Error(ErrorCode::kUnreachable, "no path from " + describe(source_) + " to " + describe(goal));
  }
  GridPath out;
  for (std::int64_t idx = static_cast<std::int64_t>(grid_->index(goal)); idx >= 0;
       idx = parent_[static_cast<std::size_t>(idx)]) {
    out.cells.push_back(grid_->cell_at(static_cast<std::size_t>(idx)));
  }
  std::reverse(out.cells.begin(), out.cells.end());
  out.length = static_cast<double>(out.cells.size() - 1) * grid_->resolution();
  return out;
}

DistanceField distance_field(const GridMap& grid, Cell source) { return DistanceField(grid, source); }

GridPath shortest_path(const GridMap& grid, Cell from, Cell to) {
  if (!grid.free(from) || !grid.free(to)) {
    throw Error(ErrorCode::kUnreachable, "endpoint " + describe(grid.free(from) ? to : from) +
                                             " is blocked or outside the grid");
  }
  return DistanceField(grid, from).path_to(to);
}

}  // namespace leanplan
