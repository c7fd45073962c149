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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nods/geometry.hpp"

namespace nods {

struct Lane {
  std::string id;
  std::vector<Point2> centerline;
  double width = 3.5;
  std::vector<std::string> successors;
  std::optional<std::string> left_neighbor;
  std::optional<std::string> right_neighbor;

  bool operator==(const Lane&) const = default;
};

struct RoadMap {
  std::string id;
  std::vector<Lane> lanes;

  const Lane* find_lane(std::string_view lane_id) const;
  /// Union of every lane band.
  Region drivable_area() const;
  std::pair<Point2, Point2> bounds() const;

  bool operator==(const RoadMap&) const = default;
};

struct MotionTask {
  Pose start;
  Point2 destination = Point2::Zero();
  double goal_radius = 2.0;
  double time_limit = 30.0;
};

struct Waypoint {
  double t = 0.0;
  Point2 position = Point2::Zero();
  double heading = 0.0;
  double v = 0.0;
  double a = 0.0;

  Pose pose() const { return Pose(position, heading); }
};

enum class ParticipantKind { StaticObstacle, NpcVehicle };
enum class ParticipantOrigin { Seed, Added };

struct Participant {
  std::string id;
  ParticipantKind kind = ParticipantKind::StaticObstacle;
  Footprint footprint{0.6, 0.6};
  std::vector<Waypoint> trajectory;
  ParticipantOrigin origin = ParticipantOrigin::Seed;

  bool is_static() const { return kind == ParticipantKind::StaticObstacle; }
  bool is_added() const { return origin == ParticipantOrigin::Added; }
};

struct Scenario {
  std::string id;
  std::string map_id;
  MotionTask task;
  std::vector<Participant> participants;

  const Participant* find(std::string_view participant_id) const;
};

/// One time-slice of a simulation. `participants[i]` belongs to
/// `Observation::participant_ids[i]`.
struct Scene {
  double t = 0.0;
  Waypoint ego;
  std::vector<Waypoint> participants;
};

struct Observation {
  double dt = 0.1;
  std::vector<std::string> participant_ids;
  std::vector<Scene> scenes;

  double duration() const { return scenes.empty() ? 0.0 : scenes.back().t; }
  /// Drops one participant column; no-op for unknown ids.
  Observation without(std::string_view participant_id) const;
};

struct DrivingPath {
  std::vector<Point2> points;
};

/// Ego positions of every scene, in time order.
DrivingPath ego_path(const Observation& obs);

// Field-wise equality with exact floating comparison; the JSON round trip is
// required to be lossless.
bool operator==(const MotionTask& a, const MotionTask& b);
bool operator==(const Waypoint& a, const Waypoint& b);
bool operator==(const Participant& a, const Participant& b);
bool operator==(const Scenario& a, const Scenario& b);

/// Parses `scenario.json`. Throws SchemaError for missing or mistyped fields,
/// InvariantError for map-independent invariant violations.
Scenario load_scenario(std::string_view text);
std::string save_scenario(const Scenario& scenario);

RoadMap load_map(std::string_view text);
std::string save_map(const RoadMap& map);

Observation load_observation(std::string_view text);
std::string save_observation(const Observation& obs);

/// Every invariant violation, each message naming the offending participant
/// (or "task"/"map"). Empty means valid. `map` adds on-map containment checks.
std::vector<std::string> validate_scenario(const Scenario& scenario, const RoadMap* map = nullptr,
                                           const Footprint& ego_footprint = Footprint{});

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

Scenario load_scenario_file(const std::string& path);
RoadMap load_map_file(const std::string& path);

}  // namespace nods
