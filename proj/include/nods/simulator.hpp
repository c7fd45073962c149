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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nods/scenario.hpp"

namespace nods {

/// Ego vehicle parameters for the kinematic bicycle model.
struct EgoParams {
  Footprint footprint{4.6, 2.1};
  double wheelbase = 2.8;
  double steer_max = 0.6;
  double accel_max = 3.0;
  double decel_max = 6.0;
  double speed_max = 12.0;
};

struct SimConfig {
  double sim_dt = 0.1;
  std::size_t max_steps = 3000;
  double replan_period = 0.5;
  /// Constant-velocity prediction handed to the planner.
  double prediction_horizon = 3.0;
  double prediction_step = 0.5;
  /// Stuck = displacement below `stuck_distance` over `stuck_window` seconds.
  double stuck_window = 10.0;
  double stuck_distance = 0.2;
  EgoParams ego;

  /// Throws ConfigError.
  void validate() const;
};

struct ObservedParticipant {
  std::string id;
  ParticipantKind kind = ParticipantKind::StaticObstacle;
  Footprint footprint;
  Waypoint current;
  std::vector<Waypoint> predicted;
};

struct WorldView {
  double t = 0.0;
  Waypoint ego;
  const RoadMap* map = nullptr;
  Point2 destination = Point2::Zero();
  double goal_radius = 2.0;
  std::vector<ObservedParticipant> participants;
};

struct PlannedPath {
  std::vector<Point2> points;
  std::vector<double> speeds;
};

/// The system under test. plan() must be deterministic and callable from any
/// single thread; the returned path starts within 0.5 m of the ego.
class PlannerInterface {
 public:
  virtual ~PlannerInterface() = default;
  /// Throws NoRoute when no path exists.
  virtual PlannedPath plan(const WorldView& view) const = 0;
};

enum class TaskStatus { Completed, Collision, Timeout, Stuck };

const char* to_string(TaskStatus status);

struct TaskOutcome {
  TaskStatus status = TaskStatus::Timeout;
  double elapsed = 0.0;
  std::optional<std::pair<std::string, std::string>> collision_pair;
};

struct SimResult {
  Observation observation;
  TaskOutcome outcome;
};

inline constexpr const char* kEgoId = "ego";

/// Kinematic bicycle step; position integrates with the pre-step speed and
/// heading, speed is clamped at zero.
Waypoint step_ego(const Waypoint& state, double accel, double steer, double dt, double wheelbase);

/// Participant state at time t. Position is linearly interpolated between
/// authored waypoints and clamped at both ends; inside a segment the heading
/// is that of the segment's end waypoint.
Waypoint replay_npc(const Participant& participant, double t);

/// Poses needed to bound the area a participant covers during [t0, t1]:
/// window endpoints plus both sides of every authored waypoint in between.
std::vector<Pose> participant_window_poses(const Participant& participant, double t0, double t1);

/// First overlapping pair in a scene, ego pairs first. `footprints[i]` matches
/// `scene.participants[i]`.
std::optional<std::pair<std::string, std::string>> collision_check(const Scene& scene,
                                                                   const std::vector<std::string>& ids,
                                                                   const std::vector<Footprint>& footprints,
                                                                   const Footprint& ego_footprint);

/// Closed-loop run of the scenario. `rng_seed` is accepted for interface
/// stability; the current pipeline has no stochastic element.
SimResult simulate(const Scenario& scenario, const RoadMap& map, const PlannerInterface& planner,
                   const SimConfig& cfg, std::uint64_t rng_seed = 0);

/// Open-loop replay of a recorded ego path (one point per sim_dt) through a
/// mutated scenario: true iff it ends at the destination, collides with
/// nothing, and keeps `clearance` from every participant throughout.
bool replay_validation(const Scenario& mutated, const DrivingPath& original_path, const RoadMap& map,
                       const SimConfig& cfg, double clearance = 0.5);

/// Ego poses of an observation (heading as recorded).
std::vector<Pose> ego_poses(const Observation& obs, double t0, double t1);

}  // namespace nods
