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

#include "nods/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace nods {

namespace {

// Pure-pursuit tracking of the latest planned path.
struct Tracker {
  double lookahead_min = 3.0;
  double lookahead_gain = 0.6;
  double speed_gain = 1.5;
  double lateral_accel_max = 2.5;

  std::pair<double, double> command(const Waypoint& ego, const PlannedPath& path, const EgoParams& p) const {
    if (path.points.size() < 2) return {-p.decel_max, 0.0};

    // Closest segment.
    std::size_t seg = 0;
    double seg_t = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
      const Point2 a = path.points[i];
      const Point2 ab = path.points[i + 1] - a;
      const double len2 = ab.squaredNorm();
      const double t = len2 > 0 ? std::clamp((ego.position - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
      const double d = (ego.position - (a + t * ab)).squaredNorm();
      if (d < best) {
        best = d;
        seg = i;
        seg_t = t;
      }
    }

    const double lookahead = lookahead_min + lookahead_gain * ego.v;
    Point2 target = path.points.back();
    double remaining = lookahead;
    Point2 from = path.points[seg] + seg_t * (path.points[seg + 1] - path.points[seg]);
    for (std::size_t i = seg + 1; i < path.points.size(); ++i) {
      const double len = (path.points[i] - from).norm();
      if (len >= remaining) {
        target = from + (path.points[i] - from) * (remaining / len);
        break;
      }
      remaining -= len;
      from = path.points[i];
    }

    const Point2 d = target - ego.position;
    const double ld = std::max(d.norm(), 1e-6);
    const double alpha = normalize_angle(std::atan2(d.y(), d.x()) - ego.heading);
    const double steer = std::clamp(std::atan(2.0 * p.wheelbase * std::sin(alpha) / ld), -p.steer_max, p.steer_max);

    double v_target = std::min(path.speeds[std::min(seg + 1, path.speeds.size() - 1)], path.speeds[seg]);
    const double curvature = std::abs(2.0 * std::sin(alpha) / ld);
    if (curvature > 1e-6) v_target = std::min(v_target, std::sqrt(lateral_accel_max / curvature));
    v_target = std::min(v_target, p.speed_max);
    const double accel = std::clamp(speed_gain * (v_target - ego.v), -p.decel_max, p.accel_max);
    return {accel, steer};
  }
};

std::vector<ObservedParticipant> observe(const Scenario& s, double t, const SimConfig& cfg) {
  std::vector<ObservedParticipant> out;
  out.reserve(s.participants.size());
  for (const auto& p : s.participants) {
    ObservedParticipant o{p.id, p.kind, p.footprint, replay_npc(p, t), {}};
    if (!p.is_static() && o.current.v > 0.0) {
      const Point2 vel = o.current.v * o.current.pose().forward();
      for (double tau = cfg.prediction_step; tau <= cfg.prediction_horizon + 1e-9; tau += cfg.prediction_step) {
        Waypoint w = o.current;
        w.t = t + tau;
        w.position += vel * tau;
        o.predicted.push_back(w);
      }
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace

void SimConfig::validate() const {
  if (!(sim_dt > 0.0)) throw ConfigError("sim_dt must be > 0");
  if (!(replan_period >= sim_dt)) throw ConfigError("replan_period must be >= sim_dt");
  if (max_steps == 0) throw ConfigError("max_steps must be > 0");
  if (!(prediction_step > 0.0) || prediction_horizon < 0.0) throw ConfigError("bad prediction settings");
  if (!(ego.wheelbase > 0.0) || !(ego.steer_max > 0.0)) throw ConfigError("bad ego parameters");
}

const char* to_string(TaskStatus status) {
  switch (status) {
    case TaskStatus::Completed: return "completed";
    case TaskStatus::Collision: return "collision";
    case TaskStatus::Timeout: return "timeout";
    case TaskStatus::Stuck: return "stuck";
  }
  return "unknown";
}

Waypoint step_ego(const Waypoint& s, double accel, double steer, double dt, double wheelbase) {
  Waypoint n = s;
  n.t = s.t + dt;
  n.position.x() = s.position.x() + s.v * std::cos(s.heading) * dt;
  n.position.y() = s.position.y() + s.v * std::sin(s.heading) * dt;
  n.heading = normalize_angle(s.heading + s.v / wheelbase * std::tan(steer) * dt);
  n.v = std::max(0.0, s.v + accel * dt);
  n.a = (n.v - s.v) / dt;
  return n;
}

Waypoint replay_npc(const Participant& p, double t) {
  const auto& traj = p.trajectory;
  if (traj.empty()) return Waypoint{t, Point2::Zero(), 0.0, 0.0, 0.0};
  if (p.is_static() || t <= traj.front().t) {
    Waypoint w = traj.front();
    w.t = t;
    if (p.is_static() || traj.size() == 1) w.v = w.a = 0.0;
    return w;
  }
  if (t >= traj.back().t) {
    Waypoint w = traj.back();
    w.t = t;
    w.v = 0.0;
    w.a = 0.0;
    return w;
  }
  const auto it = std::lower_bound(traj.begin(), traj.end(), t, [](const Waypoint& w, double tt) { return w.t < tt; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  const double span = b.t - a.t;
  const double u = (t - a.t) / span;
  Waypoint w;
  w.t = t;
  w.position = a.position + u * (b.position - a.position);
  w.heading = b.heading;
  w.v = a.v + u * (b.v - a.v);
  w.a = (b.v - a.v) / span;
  return w;
}

std::vector<Pose> participant_window_poses(const Participant& p, double t0, double t1) {
  const auto& traj = p.trajectory;
  if (traj.empty()) return {};
  if (p.is_static() || traj.size() == 1) return {traj.front().pose()};
  std::vector<Pose> poses;
  poses.push_back(replay_npc(p, t0).pose());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double ti = traj[i].t;
    if (ti < t0 - 1e-9 || ti > t1 + 1e-9) continue;
    if (ti > t0 + 1e-9) poses.push_back(traj[i].pose());
    if (i + 1 < traj.size() && ti < t1 - 1e-9) poses.emplace_back(traj[i].position, traj[i + 1].heading);
  }
  if (t1 > t0) poses.push_back(replay_npc(p, t1).pose());
  return poses;
}

std::vector<Pose> ego_poses(const Observation& obs, double t0, double t1) {
  std::vector<Pose> poses;
  for (const auto& scene : obs.scenes) {
    if (scene.t >= t0 - 1e-9 && scene.t <= t1 + 1e-9) poses.push_back(scene.ego.pose());
  }
  // Past the end of the recording the ego stays at its final pose.
  if (poses.empty() && !obs.scenes.empty() && t0 >= obs.scenes.back().t) poses.push_back(obs.scenes.back().ego.pose());
  return poses;
}

std::optional<std::pair<std::string, std::string>> collision_check(const Scene& scene,
                                                                   const std::vector<std::string>& ids,
                                                                   const std::vector<Footprint>& footprints,
                                                                   const Footprint& ego_footprint) {
  const auto ego_box = footprint_corners(scene.ego.pose(), ego_footprint);
  std::vector<std::array<Point2, 4>> boxes;
  boxes.reserve(scene.participants.size());
  for (std::size_t i = 0; i < scene.participants.size(); ++i)
    boxes.push_back(footprint_corners(scene.participants[i].pose(), footprints[i]));
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (rectangles_overlap(ego_box, boxes[i])) return std::make_pair(std::string(kEgoId), ids[i]);
  }
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      if (rectangles_overlap(boxes[i], boxes[j])) return std::make_pair(ids[i], ids[j]);
    }
  }
  return std::nullopt;
}

SimResult simulate(const Scenario& s, const RoadMap& map, const PlannerInterface& planner, const SimConfig& cfg,
                   std::uint64_t /*rng_seed*/) {
  cfg.validate();
  const EgoParams& ego_p = cfg.ego;
  const Tracker tracker;

  std::vector<std::string> ids;
  std::vector<Footprint> footprints;
  for (const auto& p : s.participants) {
    ids.push_back(p.id);
    footprints.push_back(p.footprint);
  }

  SimResult result;
  Observation& obs = result.observation;
  obs.dt = cfg.sim_dt;
  obs.participant_ids = ids;

  Waypoint ego{0.0, s.task.start.position, s.task.start.heading, 0.0, 0.0};
  auto make_scene = [&](double t) {
    Scene scene{t, ego, {}};
    scene.participants.reserve(s.participants.size());
    for (const auto& p : s.participants) scene.participants.push_back(replay_npc(p, t));
    return scene;
  };

  const auto replan_every = static_cast<std::size_t>(std::max(1.0, std::round(cfg.replan_period / cfg.sim_dt)));
  const auto stuck_steps = static_cast<std::size_t>(std::round(cfg.stuck_window / cfg.sim_dt));
  const auto limit_steps = std::min<std::size_t>(
      cfg.max_steps, static_cast<std::size_t>(std::ceil(s.task.time_limit / cfg.sim_dt - 1e-9)));

  PlannedPath path;
  for (std::size_t step = 0;; ++step) {
    const double t = static_cast<double>(step) * cfg.sim_dt;
    ego.t = t;
    obs.scenes.push_back(make_scene(t));

    if (auto hit = collision_check(obs.scenes.back(), ids, footprints, ego_p.footprint)) {
      result.outcome = {TaskStatus::Collision, t, std::move(hit)};
      break;
    }
    if ((ego.position - s.task.destination).norm() <= s.task.goal_radius) {
      result.outcome = {TaskStatus::Completed, t, std::nullopt};
      break;
    }
    if (step >= limit_steps) {
      result.outcome = {TaskStatus::Timeout, t, std::nullopt};
      break;
    }
    if (stuck_steps > 0 && step >= stuck_steps &&
        (ego.position - obs.scenes[step - stuck_steps].ego.position).norm() < cfg.stuck_distance) {
      result.outcome = {TaskStatus::Stuck, t, std::nullopt};
      break;
    }

    if (step % replan_every == 0) {
      WorldView view{t, ego, &map, s.task.destination, s.task.goal_radius, observe(s, t, cfg)};
      try {
        path = planner.plan(view);
      } catch (const NoRoute&) {
        path = {};
      }
    }
    const auto [accel, steer] = tracker.command(ego, path, ego_p);
    ego = step_ego(ego, accel, steer, cfg.sim_dt, ego_p.wheelbase);
  }
  return result;
}

bool replay_validation(const Scenario& mutated, const DrivingPath& original_path, const RoadMap& /*map*/,
                       const SimConfig& cfg, double clearance) {
  const auto& pts = original_path.points;
  if (pts.size() < 2) return false;
  if ((pts.back() - mutated.task.destination).norm() > mutated.task.goal_radius + 1e-9) return false;

  std::vector<Footprint> footprints;
  for (const auto& p : mutated.participants) footprints.push_back(p.footprint);

  double heading = mutated.task.start.heading;
  std::vector<std::array<Point2, 4>> boxes(mutated.participants.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    // Recorded motion is along the heading, so the forward difference
    // recovers it wherever the ego moved.
    if (i + 1 < pts.size() && (pts[i + 1] - pts[i]).norm() > 1e-9) {
      const Point2 d = pts[i + 1] - pts[i];
      heading = std::atan2(d.y(), d.x());
    }
    const double t = static_cast<double>(i) * cfg.sim_dt;
    const auto ego_box = footprint_corners(Pose(pts[i], heading), cfg.ego.footprint);
    for (std::size_t k = 0; k < mutated.participants.size(); ++k) {
      boxes[k] = footprint_corners(replay_npc(mutated.participants[k], t).pose(), footprints[k]);
      if (rectangle_distance(ego_box, boxes[k]) < clearance) return false;
    }
    for (std::size_t a = 0; a < boxes.size(); ++a) {
      for (std::size_t b = a + 1; b < boxes.size(); ++b) {
        if (rectangles_overlap(boxes[a], boxes[b])) return false;
      }
    }
  }
  return true;
}

}  // namespace nods
