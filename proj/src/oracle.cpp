/*
 * Copyright 2026 The nodsearch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "nods/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nods {

namespace {

// Cells visited by the segment a -> b in grid units, under floor semantics.
// An axis moving in the positive direction changes cell exactly when the
// coordinate reaches an integer; a negative-moving axis changes just after.
void traverse(const Eigen::Vector2d& a, const Eigen::Vector2d& b, std::vector<GridCell>& out) {
  std::int64_t cell[2] = {static_cast<std::int64_t>(std::floor(a.x())), static_cast<std::int64_t>(std::floor(a.y()))};
  out.emplace_back(cell[0], cell[1]);
  const Eigen::Vector2d d = b - a;
  int step[2];
  double t_max[2];
  double t_delta[2];
  for (int k = 0; k < 2; ++k) {
    if (d[k] > 0) {
      step[k] = 1;
      t_max[k] = (static_cast<double>(cell[k]) + 1.0 - a[k]) / d[k];
      t_delta[k] = 1.0 / d[k];
    } else if (d[k] < 0) {
      step[k] = -1;
      t_max[k] = (a[k] - static_cast<double>(cell[k])) / -d[k];
      t_delta[k] = -1.0 / d[k];
    } else {
      step[k] = 0;
      t_max[k] = std::numeric_limits<double>::infinity();
      t_delta[k] = 0.0;
    }
  }
  const auto end_x = static_cast<std::int64_t>(std::floor(b.x()));
  const auto end_y = static_cast<std::int64_t>(std::floor(b.y()));
  // Safety bound on the number of steps.
  const std::int64_t budget = std::llabs(end_x - cell[0]) + std::llabs(end_y - cell[1]) + 4;
  for (std::int64_t n = 0; n < budget; ++n) {
    auto due = [&](int k) { return step[k] > 0 ? t_max[k] <= 1.0 : (step[k] < 0 && t_max[k] < 1.0); };
    const bool due_x = due(0);
    const bool due_y = due(1);
    if (!due_x && !due_y) break;
    int axis;
    bool both = false;
    if (due_x && due_y && t_max[0] == t_max[1]) {
      // Same crossing time: positive axes move first, equal signs move together.
      if (step[0] == step[1]) {
        both = true;
        axis = 0;
      } else {
        axis = step[0] > 0 ? 0 : 1;
      }
    } else if (due_x && (!due_y || t_max[0] < t_max[1])) {
      axis = 0;
    } else {
      axis = 1;
    }
    cell[axis] += step[axis];
    t_max[axis] += t_delta[axis];
    if (both) {
      cell[1] += step[1];
      t_max[1] += t_delta[1];
    }
    out.emplace_back(cell[0], cell[1]);
  }
}

}  // namespace

GridSpec grid_for_map(const RoadMap& map, double cell_size) {
  if (!(cell_size > 0.0)) throw ConfigError("grid cell size must be > 0");
  return GridSpec{cell_size, map.bounds().first};
}

bool GridCellSet::contains(const GridCell& c) const { return std::binary_search(cells.begin(), cells.end(), c); }

GridCellSet GridCellSet::from_cells(std::vector<GridCell> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return GridCellSet{std::move(cells)};
}

GridCell grid_cell(const Point2& p, const GridSpec& spec) {
  return {static_cast<std::int64_t>(std::floor((p.x() - spec.origin.x()) / spec.cell_size)),
          static_cast<std::int64_t>(std::floor((p.y() - spec.origin.y()) / spec.cell_size))};
}

GridCellSet covered_grids(const DrivingPath& path, const GridSpec& spec) {
  if (!(spec.cell_size > 0.0)) throw ConfigError("grid cell size must be > 0");
  std::vector<GridCell> cells;
  const auto& pts = path.points;
  if (pts.size() == 1) cells.push_back(grid_cell(pts.front(), spec));
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    traverse((pts[i] - spec.origin) / spec.cell_size, (pts[i + 1] - spec.origin) / spec.cell_size, cells);
  }
  return GridCellSet::from_cells(std::move(cells));
}

double grid_similarity(const GridCellSet& a, const GridCellSet& b) {
  if (a.empty() && b.empty()) throw BothEmpty("similarity of two empty cell sets");
  std::size_t common = 0;
  auto i = a.cells.begin();
  auto j = b.cells.begin();
  while (i != a.cells.end() && j != b.cells.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t unite = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(unite);
}

ConsistencyVerdict consistency_check(const DrivingPath& tau_star, const DrivingPath& tau_prime, const GridSpec& spec,
                                     double epsilon) {
  const double sim = grid_similarity(covered_grids(tau_star, spec), covered_grids(tau_prime, spec));
  return ConsistencyVerdict{sim, sim > epsilon, epsilon};
}

bool is_nods(const TaskOutcome& outcome, const ConsistencyVerdict& verdict) {
  return outcome.status == TaskStatus::Completed && !verdict.consistent;
}

}  // namespace nods
