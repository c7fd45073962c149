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


#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nods/scenario.hpp"
#include "nods/simulator.hpp"

namespace nods {

struct GridSpec {
  double cell_size = 2.0;
  Point2 origin = Point2::Zero();
};

/// Grid anchored at the map's bounding-box minimum.
GridSpec grid_for_map(const RoadMap& map, double cell_size = 2.0);

using GridCell = std::pair<std::int64_t, std::int64_t>;

/// Sorted, duplicate-free set of (i, j) cell indices.
struct GridCellSet {
  std::vector<GridCell> cells;

  std::size_t size() const { return cells.size(); }
  bool empty() const { return cells.empty(); }
  bool contains(const GridCell& c) const;
  static GridCellSet from_cells(std::vector<GridCell> cells);

  bool operator==(const GridCellSet&) const = default;
};

struct ConsistencyVerdict {
  double similarity = 1.0;
  bool consistent = true;
  double threshold = 0.6;
};

GridCell grid_cell(const Point2& p, const GridSpec& spec);

/// Cells of every path point plus every cell the polyline passes through
/// between consecutive points. Cells are half-open: [i, i+1) * cell_size.
GridCellSet covered_grids(const DrivingPath& path, const GridSpec& spec);

/// Jaccard index. Throws BothEmpty when both sets are empty.
double grid_similarity(const GridCellSet& a, const GridCellSet& b);

/// consistent iff similarity > epsilon.
ConsistencyVerdict consistency_check(const DrivingPath& tau_star, const DrivingPath& tau_prime, const GridSpec& spec,
                                     double epsilon);

bool is_nods(const TaskOutcome& outcome, const ConsistencyVerdict& verdict);

}  // namespace nods
