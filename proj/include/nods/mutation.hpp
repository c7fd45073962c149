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

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "nods/geometry.hpp"
#include "nods/scenario.hpp"
#include "nods/simulator.hpp"

namespace nods {

enum class MutationOp { Add, Remove, Change };

const char* to_string(MutationOp op);

struct MutationConfig {
  double delta_t = 2.0;
  std::size_t max_added = 6;
  double npc_speed_max = 8.0;
  double npc_steer_max = 0.5;
  double static_fraction = 0.5;
  /// Probabilities of Add, Remove, Change.
  std::array<double, 3> op_weights{0.5, 0.25, 0.25};
  /// Minimum gap kept between an added participant and everything it must avoid.
  double clearance = 0.5;
  Footprint npc_footprint{4.5, 2.0};
  Footprint static_footprint{0.6, 0.6};
  /// Rejection-sampling draws per waypoint before falling back to exact areas.
  int max_samples = 48;

  /// Throws ConfigError.
  void validate() const;
};

struct MutationOutcome {
  Scenario scenario;
  MutationOp op_used = MutationOp::Add;
  bool aborted = false;
};

/// Everything mutation needs from the seed ODS, precomputed once.
class MutationContext {
 public:
  MutationContext(RoadMap map, Scenario seed, Observation seed_obs, Footprint ego_footprint = Footprint{});

  const RoadMap& map() const { return map_; }
  const Scenario& seed() const { return seed_; }
  const Observation& seed_obs() const { return seed_obs_; }
  const RegionSampler& drivable() const { return drivable_; }
  const Footprint& ego_footprint() const { return ego_footprint_; }

  /// Time after which the seed ego and every participant of `s` are at rest.
  double horizon(const Scenario& s) const;
  /// Direction of the nearest lane centerline segment.
  double lane_heading(const Point2& p) const;

 private:
  RoadMap map_;
  Scenario seed_;
  Observation seed_obs_;
  Footprint ego_footprint_;
  RegionSampler drivable_;
  std::vector<std::pair<Point2, Point2>> segments_;
};

/// Feasible area for the next waypoint of an added participant at `y_t`:
/// the reachable sector minus the area swept by the ego's optimal segment and
/// by every participant over [t0, t0 + delta_t]. Subtracted areas are grown
/// by `margin`.
Region non_invasive_area(const Pose& y_t, std::span<const Pose> ego_segment, std::span<const Participant> participants,
                         double t0, const MutationConfig& cfg, const Footprint& ego_footprint, double margin = 0.0);

/// Adding: one new participant, non-invasive in every window.
/// Throws Saturated when max_added is reached.
MutationOutcome mutate_add(const MutationContext& ctx, const Scenario& current, const MutationConfig& cfg,
                           std::mt19937_64& rng);
/// Removes one uniformly chosen added participant.
MutationOutcome mutate_remove(const Scenario& current, std::mt19937_64& rng);
/// Remove followed by add; the removed participant no longer constrains the add.
MutationOutcome mutate_change(const MutationContext& ctx, const Scenario& current, const MutationConfig& cfg,
                              std::mt19937_64& rng);
/// Draws an operator by op_weights and retries a different one on abort,
/// at most three attempts.
MutationOutcome mutate(const MutationContext& ctx, const Scenario& current, const MutationConfig& cfg,
                       std::mt19937_64& rng);

/// Unconstrained add-or-remove: placements only avoid overlap at t = 0.
MutationOutcome random_mutate(const MutationContext& ctx, const Scenario& current, const MutationConfig& cfg,
                              std::mt19937_64& rng);

/// Exact per-window check of one added participant against the ego's optimal
/// path and every participant listed before it.
bool is_non_invasive(const MutationContext& ctx, const Scenario& s, const std::string& participant_id,
                     double delta_t);

}  // namespace nods
