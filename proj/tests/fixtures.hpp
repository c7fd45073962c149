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


// Small hand-built maps and scenarios shared by the unit tests.

#pragma once

#include <string>

#include "nods/scenario.hpp"

namespace fixture {

using namespace nods;

inline const std::string kCorpus = NODS_CORPUS_DIR;

inline const char* const kSeeds[] = {"S1_left_turn", "S2_right_turn", "S3_lane_follow",
                                     "S4_u_turn",    "S5_crossing",   "S6_driveway_exit"};

inline Scenario seed(const std::string& name) { return load_scenario_file(kCorpus + "/seeds/" + name + ".json"); }

inline RoadMap map_of(const Scenario& s) { return load_map_file(kCorpus + "/maps/" + s.map_id + ".json"); }

// Same-direction lanes along +x, 100 m long, 3.5 m wide, r0 at y = 1.75.
// Lane centers sit on planner lattice cell centers and away from 2 m grid
// lines.
inline RoadMap straight_road(int n_lanes = 2) {
  RoadMap m;
  m.id = "two_lane";
  for (int i = 0; i < n_lanes; ++i) {
    const double y = 1.75 + 3.5 * i;
    Lane lane{"r" + std::to_string(i), {Point2(0, y), Point2(100, y)}, 3.5, {}, std::nullopt, std::nullopt};
    if (i + 1 < n_lanes) lane.left_neighbor = "r" + std::to_string(i + 1);
    if (i > 0) lane.right_neighbor = "r" + std::to_string(i - 1);
    m.lanes.push_back(lane);
  }
  return m;
}

inline RoadMap two_lane_road() { return straight_road(2); }

inline Scenario straight_task(double dest_y = 1.75) {
  Scenario s;
  s.id = "straight";
  s.map_id = "two_lane";
  s.task.start = Pose(Point2(5, 1.75), 0.0);
  s.task.destination = Point2(90, dest_y);
  s.task.goal_radius = 2.0;
  s.task.time_limit = 30.0;
  return s;
}

inline Participant cone(const std::string& id, const Point2& at, Footprint fp = Footprint{0.6, 0.6}) {
  Participant p;
  p.id = id;
  p.footprint = fp;
  p.trajectory.push_back(Waypoint{0.0, at, 0.0, 0.0, 0.0});
  return p;
}

// Crossings of the r0/r1 boundary at y = 3.5.
template <typename Points>
int lane_changes(const Points& pts) {
  int changes = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) changes += (pts[i].y() > 3.5) != (pts[i - 1].y() > 3.5);
  return changes;
}

}  // namespace fixture
