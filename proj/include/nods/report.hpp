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

#include <string>
#include <vector>

#include "nods/engine.hpp"
#include "nods/oracle.hpp"
#include "nods/scenario.hpp"

namespace nods {

struct PathLayer {
  DrivingPath path;
  std::string label;
  std::string color = "#1f77b4";
  bool dashed = false;
  /// Shade the grid cells the path covers.
  bool show_cells = false;
};

struct RenderOptions {
  double pixels_per_meter = 8.0;
  bool grid = false;
  GridSpec grid_spec;
};

/// Deterministic SVG of lanes, the ego task, participants (NPC trajectories
/// as polylines) and any number of ego paths.
std::string render_svg(const RoadMap& map, const Scenario& scenario, const std::vector<PathLayer>& paths,
                       const RenderOptions& options = {});

/// Header: strategy,seed_id,rng_seed,nods_count,mutation_valid_pct,wall_s
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

}  // namespace nods
