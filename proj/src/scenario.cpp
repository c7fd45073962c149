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

#include "nods/scenario.hpp"

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

namespace nods {

using json = nlohmann::json;

namespace {

const json& field(const json& j, const char* name, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  const auto it = j.find(name);
  if (it == j.end()) throw SchemaError(where + ": missing field '" + name + "'");
  return *it;
}

double number(const json& j, const char* name, const std::string& where) {
  const json& v = field(j, name, where);
  if (!v.is_number()) throw SchemaError(where + "." + name + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(where + "." + name + ": not finite");
  return d;
}

double positive(const json& j, const char* name, const std::string& where) {
  const double d = number(j, name, where);
  if (!(d > 0.0)) throw SchemaError(where + "." + name + ": must be > 0");
  return d;
}

std::string text(const json& j, const char* name, const std::string& where) {
  const json& v = field(j, name, where);
  if (!v.is_string()) throw SchemaError(where + "." + name + ": expected a string");
  return v.get<std::string>();
}

const json& array(const json& j, const char* name, const std::string& where) {
  const json& v = field(j, name, where);
  if (!v.is_array()) throw SchemaError(where + "." + name + ": expected an array");
  return v;
}

json parse(std::string_view doc, const char* what) {
  try {
    return json::parse(doc);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

Point2 point(const json& j, const std::string& where) { return {number(j, "x", where), number(j, "y", where)}; }

json waypoint_json(const Waypoint& w) {
  return json{{"t_s", w.t},          {"x", w.position.x()}, {"y", w.position.y()},
              {"heading_rad", w.heading}, {"v_mps", w.v},       {"a_mps2", w.a}};
}

Waypoint waypoint_from(const json& j, const std::string& where) {
  Waypoint w;
  w.t = number(j, "t_s", where);
  w.position = point(j, where);
  w.heading = normalize_angle(number(j, "heading_rad", where));
  w.v = number(j, "v_mps", where);
  w.a = number(j, "a_mps2", where);
  return w;
}

const char* kind_name(ParticipantKind k) {
  return k == ParticipantKind::StaticObstacle ? "static_obstacle" : "npc_vehicle";
}

const char* origin_name(ParticipantOrigin o) { return o == ParticipantOrigin::Seed ? "seed" : "added"; }

}  // namespace

const Lane* RoadMap::find_lane(std::string_view lane_id) const {
  for (const auto& lane : lanes) {
    if (lane.id == lane_id) return &lane;
  }
  return nullptr;
}

Region RoadMap::drivable_area() const {
  std::vector<Region> bands;
  bands.reserve(lanes.size());
  for (const auto& lane : lanes) bands.push_back(polyline_band(lane.centerline, 0.5 * lane.width));
  return region_union(bands);
}

std::pair<Point2, Point2> RoadMap::bounds() const {
  Point2 lo = Point2::Constant(std::numeric_limits<double>::infinity());
  Point2 hi = -lo;
  for (const auto& lane : lanes) {
    for (const auto& p : lane.centerline) {
      lo = lo.cwiseMin(p - Point2::Constant(0.5 * lane.width));
      hi = hi.cwiseMax(p + Point2::Constant(0.5 * lane.width));
    }
  }
  if (lanes.empty()) return {Point2::Zero(), Point2::Zero()};
  return {lo, hi};
}

const Participant* Scenario::find(std::string_view participant_id) const {
  for (const auto& p : participants) {
    if (p.id == participant_id) return &p;
  }
  return nullptr;
}

Observation Observation::without(std::string_view participant_id) const {
  Observation out;
  out.dt = dt;
  std::size_t drop = participant_ids.size();
  for (std::size_t i = 0; i < participant_ids.size(); ++i) {
    if (participant_ids[i] == participant_id) {
      drop = i;
    } else {
      out.participant_ids.push_back(participant_ids[i]);
    }
  }
  out.scenes.reserve(scenes.size());
  for (const auto& scene : scenes) {
    Scene s{scene.t, scene.ego, {}};
    s.participants.reserve(out.participant_ids.size());
    for (std::size_t i = 0; i < scene.participants.size(); ++i) {
      if (i != drop) s.participants.push_back(scene.participants[i]);
    }
    out.scenes.push_back(std::move(s));
  }
  return out;
}

DrivingPath ego_path(const Observation& obs) {
  DrivingPath path;
  path.points.reserve(obs.scenes.size());
  for (const auto& scene : obs.scenes) path.points.push_back(scene.ego.position);
  return path;
}

bool operator==(const MotionTask& a, const MotionTask& b) {
  return a.start.position == b.start.position && a.start.heading == b.start.heading &&
         a.destination == b.destination && a.goal_radius == b.goal_radius && a.time_limit == b.time_limit;
}

bool operator==(const Waypoint& a, const Waypoint& b) {
  return a.t == b.t && a.position == b.position && a.heading == b.heading && a.v == b.v && a.a == b.a;
}

bool operator==(const Participant& a, const Participant& b) {
  return a.id == b.id && a.kind == b.kind && a.footprint.length == b.footprint.length &&
         a.footprint.width == b.footprint.width && a.origin == b.origin && a.trajectory == b.trajectory;
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.id == b.id && a.map_id == b.map_id && a.task == b.task && a.participants == b.participants;
}

std::vector<std::string> validate_scenario(const Scenario& s, const RoadMap* map, const Footprint& ego_fp) {
  std::vector<std::string> out;
  if (!(s.task.goal_radius > 0.0)) out.push_back("task: goal_radius must be > 0");
  if (!(s.task.time_limit > 0.0)) out.push_back("task: time_limit must be > 0");

  std::set<std::string> seen;
  for (const auto& p : s.participants) {
    const std::string who = "participant '" + p.id + "'";
    if (p.id.empty()) out.push_back("participant with empty id");
    if (!seen.insert(p.id).second) out.push_back(who + ": duplicate id");
    if (!(p.footprint.length > 0.0 && p.footprint.width > 0.0)) out.push_back(who + ": footprint must be positive");
    if (p.trajectory.empty()) {
      out.push_back(who + ": empty trajectory");
      continue;
    }
    for (const auto& w : p.trajectory) {
      if (w.v < 0.0) out.push_back(who + ": negative speed");
      if (!(w.heading > -std::numbers::pi && w.heading <= std::numbers::pi))
        out.push_back(who + ": heading not normalized");
    }
    if (p.is_static()) {
      if (p.trajectory.size() != 1) out.push_back(who + ": static obstacle needs exactly one waypoint");
      if (p.trajectory.front().v != 0.0 || p.trajectory.front().a != 0.0)
        out.push_back(who + ": static obstacle must have v = 0 and a = 0");
    } else if (p.trajectory.size() >= 2) {
      const double step = p.trajectory[1].t - p.trajectory[0].t;
      for (std::size_t i = 1; i < p.trajectory.size(); ++i) {
        const double dt = p.trajectory[i].t - p.trajectory[i - 1].t;
        if (!(dt > 0.0)) {
          out.push_back(who + ": timestamps not strictly increasing");
          break;
        }
        if (std::abs(dt - step) > 1e-6) {
          out.push_back(who + ": non-uniform timestamp step");
          break;
        }
      }
    }
  }

  // Overlap at t = 0 uses each participant's first waypoint.
  const auto ego_box = footprint_corners(s.task.start, ego_fp);
  for (std::size_t i = 0; i < s.participants.size(); ++i) {
    const auto& pi = s.participants[i];
    if (pi.trajectory.empty()) continue;
    const auto box_i = footprint_corners(pi.trajectory.front().pose(), pi.footprint);
    if (rectangles_overlap(ego_box, box_i)) out.push_back("participant '" + pi.id + "': overlaps ego start at t=0");
    for (std::size_t j = i + 1; j < s.participants.size(); ++j) {
      const auto& pj = s.participants[j];
      if (pj.trajectory.empty()) continue;
      if (rectangles_overlap(box_i, footprint_corners(pj.trajectory.front().pose(), pj.footprint)))
        out.push_back("participant '" + pi.id + "': overlaps participant '" + pj.id + "' at t=0");
    }
  }

  if (map != nullptr) {
    if (s.map_id != map->id) out.push_back("map: scenario refers to '" + s.map_id + "', got '" + map->id + "'");
    const Region drivable = map->drivable_area();
    if (!contains(drivable, s.task.start.position)) out.push_back("task: ego start is off the map");
    if (!contains(drivable, s.task.destination)) out.push_back("task: destination is off the map");
    for (const auto& p : s.participants) {
      if (!p.trajectory.empty() && !contains(drivable, p.trajectory.front().position))
        out.push_back("participant '" + p.id + "': initial position is off the map");
    }
  }
  return out;
}

std::string save_scenario(const Scenario& s) {
  json parts = json::array();
  for (const auto& p : s.participants) {
    json traj = json::array();
    for (const auto& w : p.trajectory) traj.push_back(waypoint_json(w));
    parts.push_back(json{{"id", p.id},
                         {"kind", kind_name(p.kind)},
                         {"footprint", {{"length_m", p.footprint.length}, {"width_m", p.footprint.width}}},
                         {"origin", origin_name(p.origin)},
                         {"trajectory", std::move(traj)}});
  }
  const json doc{
      {"id", s.id},
      {"map_id", s.map_id},
      {"task",
       {{"start", {{"x", s.task.start.position.x()}, {"y", s.task.start.position.y()}, {"heading_rad", s.task.start.heading}}},
        {"destination", {{"x", s.task.destination.x()}, {"y", s.task.destination.y()}}},
        {"goal_radius_m", s.task.goal_radius},
        {"time_limit_s", s.task.time_limit}}},
      {"participants", std::move(parts)}};
  return doc.dump(2) + "\n";
}

Scenario load_scenario(std::string_view doc_text) {
  const json doc = parse(doc_text, "scenario");
  Scenario s;
  s.id = text(doc, "id", "scenario");
  s.map_id = text(doc, "map_id", "scenario");
  const json& task = field(doc, "task", "scenario");
  const json& start = field(task, "start", "task");
  s.task.start = Pose(point(start, "task.start"), number(start, "heading_rad", "task.start"));
  s.task.destination = point(field(task, "destination", "task"), "task.destination");
  s.task.goal_radius = positive(task, "goal_radius_m", "task");
  s.task.time_limit = positive(task, "time_limit_s", "task");

  for (const json& pj : array(doc, "participants", "scenario")) {
    Participant p;
    p.id = text(pj, "id", "participant");
    const std::string where = "participant '" + p.id + "'";
    const std::string kind = text(pj, "kind", where);
    if (kind == "static_obstacle") {
      p.kind = ParticipantKind::StaticObstacle;
    } else if (kind == "npc_vehicle") {
      p.kind = ParticipantKind::NpcVehicle;
    } else {
      throw SchemaError(where + ": unknown kind '" + kind + "'");
    }
    const json& fp = field(pj, "footprint", where);
    p.footprint = Footprint{positive(fp, "length_m", where + ".footprint"), positive(fp, "width_m", where + ".footprint")};
    const std::string origin = text(pj, "origin", where);
    if (origin == "seed") {
      p.origin = ParticipantOrigin::Seed;
    } else if (origin == "added") {
      p.origin = ParticipantOrigin::Added;
    } else {
      throw SchemaError(where + ": unknown origin '" + origin + "'");
    }
    for (const json& wj : array(pj, "trajectory", where)) p.trajectory.push_back(waypoint_from(wj, where));
    s.participants.push_back(std::move(p));
  }

  const auto violations = validate_scenario(s);
  if (!violations.empty()) {
    std::string msg = "scenario '" + s.id + "':";
    for (const auto& v : violations) msg += " " + v + ";";
    throw InvariantError(msg);
  }
  return s;
}

std::string save_map(const RoadMap& map) {
  json lanes = json::array();
  for (const auto& lane : map.lanes) {
    json center = json::array();
    for (const auto& p : lane.centerline) center.push_back({{"x", p.x()}, {"y", p.y()}});
    lanes.push_back(json{{"id", lane.id},
                         {"centerline", std::move(center)},
                         {"width_m", lane.width},
                         {"successors", lane.successors},
                         {"left_neighbor", lane.left_neighbor ? json(*lane.left_neighbor) : json(nullptr)},
                         {"right_neighbor", lane.right_neighbor ? json(*lane.right_neighbor) : json(nullptr)}});
  }
  return json{{"id", map.id}, {"lanes", std::move(lanes)}}.dump(2) + "\n";
}

RoadMap load_map(std::string_view doc_text) {
  const json doc = parse(doc_text, "map");
  RoadMap map;
  map.id = text(doc, "id", "map");
  for (const json& lj : array(doc, "lanes", "map")) {
    Lane lane;
    lane.id = text(lj, "id", "lane");
    const std::string where = "lane '" + lane.id + "'";
    for (const json& pj : array(lj, "centerline", where)) lane.centerline.push_back(point(pj, where));
    lane.width = positive(lj, "width_m", where);
    for (const json& sj : array(lj, "successors", where)) {
      if (!sj.is_string()) throw SchemaError(where + ": successor ids must be strings");
      lane.successors.push_back(sj.get<std::string>());
    }
    for (const char* side : {"left_neighbor", "right_neighbor"}) {
      const auto it = lj.find(side);
      if (it == lj.end() || it->is_null()) continue;
      if (!it->is_string()) throw SchemaError(where + "." + side + ": expected a string or null");
      (std::string(side) == "left_neighbor" ? lane.left_neighbor : lane.right_neighbor) = it->get<std::string>();
    }
    map.lanes.push_back(std::move(lane));
  }

  std::set<std::string> ids;
  for (const auto& lane : map.lanes) {
    if (!ids.insert(lane.id).second) throw InvariantError("map: duplicate lane id '" + lane.id + "'");
    if (lane.centerline.size() < 2) throw InvariantError("lane '" + lane.id + "': needs >= 2 centerline points");
  }
  for (const auto& lane : map.lanes) {
    for (const auto& succ : lane.successors) {
      if (!ids.count(succ)) throw InvariantError("lane '" + lane.id + "': unknown successor '" + succ + "'");
    }
    for (const auto* n : {&lane.left_neighbor, &lane.right_neighbor}) {
      if (*n && !ids.count(**n)) throw InvariantError("lane '" + lane.id + "': unknown neighbor '" + **n + "'");
    }
  }
  return map;
}

std::string save_observation(const Observation& obs) {
  json scenes = json::array();
  for (const auto& scene : obs.scenes) {
    json parts = json::object();
    for (std::size_t i = 0; i < obs.participant_ids.size(); ++i)
      parts[obs.participant_ids[i]] = waypoint_json(scene.participants[i]);
    scenes.push_back(json{{"t_s", scene.t}, {"ego", waypoint_json(scene.ego)}, {"participants", std::move(parts)}});
  }
  return json{{"dt_s", obs.dt}, {"scenes", std::move(scenes)}}.dump() + "\n";
}

Observation load_observation(std::string_view doc_text) {
  const json doc = parse(doc_text, "observation");
  Observation obs;
  obs.dt = positive(doc, "dt_s", "observation");
  bool first = true;
  for (const json& sj : array(doc, "scenes", "observation")) {
    Scene scene;
    scene.t = number(sj, "t_s", "scene");
    scene.ego = waypoint_from(field(sj, "ego", "scene"), "scene.ego");
    const json& parts = field(sj, "participants", "scene");
    if (first) {
      for (const auto& [id, _] : parts.items()) obs.participant_ids.push_back(id);
      first = false;
    }
    for (const auto& id : obs.participant_ids)
      scene.participants.push_back(waypoint_from(field(parts, id.c_str(), "scene.participants"), id));
    obs.scenes.push_back(std::move(scene));
  }
  if (obs.scenes.size() < 2) throw InvariantError("observation: needs at least two scenes");
  return obs;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

Scenario load_scenario_file(const std::string& path) { return load_scenario(read_file(path)); }
RoadMap load_map_file(const std::string& path) { return load_map(read_file(path)); }

}  // namespace nods
