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
#include <string_view>
#include <vector>

#include "nods/simulator.hpp"

namespace nods {

/// Tunables of the built-in lattice planner. Distances are measured from the
/// ego reference point (its center) to the obstacle's footprint boundary.
struct PlannerParams {
  double resolution = 0.5;
  double block_radius = 1.35;    // 0.5 * ego width + 0.3
  double inflation_radius = 2.55;  // block_radius + 1.2
  double obstacle_weight = 5.0;  // per meter of incursion, per meter travelled
  double lane_change_cost = 8.0;
  double centering_weight = 1.0;
  double wrong_way_weight = 4.0;
  double cruise_speed = 8.0;
  double slowdown_per_incursion = 0.5;
  /// Cells this close to the ego are never blocked, so it can always depart.
  double departure_radius = 1.0;
  Footprint ego_footprint{4.6, 2.1};

  /// Default preset derived from the ego footprint.
  static PlannerParams defaults(const Footprint& ego = Footprint{4.6, 2.1});
  /// Over-cautious preset: block radius grown by 0.8 m.
  static PlannerParams timid(const Footprint& ego = Footprint{4.6, 2.1});
  /// "default" or "timid"; throws ConfigError otherwise.
  static PlannerParams preset(std::string_view name, const Footprint& ego = Footprint{4.6, 2.1});
};

/// Grid A* over a lattice of the drivable area. Cost per move is
/// length * (1 + centering + obstacle incursion) plus a fixed lane-change
/// charge and a wrong-way surcharge; cells near obstacles are blocked.
/// Ties are broken by (f, y index, x index).
class ReferencePlanner final : public PlannerInterface {
 public:
  ReferencePlanner(const RoadMap& map, PlannerParams params);

  PlannedPath plan(const WorldView& view) const override;

  /// Optimal lattice cost from the ego to the goal cells; +inf when
  /// unreachable.
  double route_cost(const WorldView& view) const;

  const PlannerParams& params() const { return params_; }

 private:
  struct Cell {
    bool valid = false;
    std::int16_t lane = -1;
    float offset = 0.0f;
    std::uint8_t allowed = 0;  // bit k: move direction k is not wrong-way
  };
  struct Search {
    std::vector<std::int32_t> path;  // cell indices, start first
    double cost = 0.0;
    std::vector<float> incursion;
  };

  Search search(const WorldView& view) const;
  Point2 center(int ix, int iy) const;

  PlannerParams params_;
  Point2 origin_;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<Cell> cells_;
  std::vector<std::vector<bool>> neighbors_;  // lane adjacency
};

}  // namespace nods
