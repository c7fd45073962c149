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


#include "nods/mutation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace nods {

namespace {

constexpr double kSampleSlack = 0.05;

std::size_t added_count(const Scenario& s) {
  return static_cast<std::size_t>(std::count_if(s.participants.begin(), s.participants.end(),
                                                [](const Participant& p) { return p.is_added(); }));
}

std::string next_added_id(const Scenario& s) {
  long next = 0;
  for (const auto& p : s.participants) {
    if (p.id.rfind("added_", 0) != 0) continue;
    try {
      next = std::max(next, std::stol(p.id.substr(6)) + 1);
    } catch (const std::exception&) {
    }
  }
  return "added_" + std::to_string(next);
}

std::size_t window_count(double horizon, double dt) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(horizon / dt - 1e-9)));
}

bool clear_of(const std::vector<Ring>& pieces, const Point2& p) {
  for (const auto& h : pieces) {
    if (convex_contains(h, p)) return false;
  }
  return true;
}

bool disjoint(const std::vector<Ring>& a, const std::vector<Ring>& b) {
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (convex_overlap(x, y)) return false;
    }
  }
  return true;
}

// Convex pieces of everything an added participant must avoid in window w,
// grown by a fixed inflation. Built lazily, one entry per window.
class Forbidden {
 public:
  Forbidden(const MutationContext& ctx, const Scenario& s, double dt, double inflation)
      : ctx_(ctx), s_(s), dt_(dt), inflation_(inflation) {}

  const std::vector<Ring>& window(std::size_t w) {
    if (w >= cache_.size()) cache_.resize(w + 1);
    if (!cache_[w]) {
      const double t0 = static_cast<double>(w) * dt_;
      const double t1 = t0 + dt_;
      std::vector<Ring> pieces;
      const auto ego = ego_poses(ctx_.seed_obs(), t0, t1);
      for (auto& h : swept_hulls(ego, ctx_.ego_footprint(), inflation_)) pieces.push_back(std::move(h));
      for (const auto& p : s_.participants) {
        const auto poses = participant_window_poses(p, t0, t1);
        for (auto& h : swept_hulls(poses, p.footprint, inflation_)) pieces.push_back(std::move(h));
      }
      cache_[w] = std::move(pieces);
    }
    return *cache_[w];
  }

  Region region(std::size_t w) {
    std::vector<Region> parts;
    for (const auto& h : window(w)) parts.push_back(Region::from_normalized({h}));
    return region_union(parts);
  }

 private:
  const MutationContext& ctx_;
  const Scenario& s_;
  double dt_;
  double inflation_;
  std::vector<std::optional<std::vector<Ring>>> cache_;
};

Ring sector_ring(const Pose& pose, double speed_max, double steer_max, double dt) {
  return sector_from_state(pose, speed_max, steer_max, dt).polygons().front();
}

// Uniform draw inside a convex sector ring, by rejection from its circular hull.
Point2 draw_in_sector(const Pose& pose, double radius, double half_angle, const Ring& ring, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 64; ++i) {
    const double r = radius * std::sqrt(unit(rng));
    const double a = pose.heading + half_angle * (2.0 * unit(rng) - 1.0);
    const Point2 p = pose.position + r * Point2(std::cos(a), std::sin(a));
    if (convex_contains(ring, p)) return p;
  }
  return pose.position + 0.5 * radius * pose.forward();
}

double bearing(const Point2& from, const Point2& to, double fallback) {
  const Point2 d = to - from;
  return d.norm() > 1e-9 ? std::atan2(d.y(), d.x()) : fallback;
}

std::vector<Ring> window_hulls(const Pose& a, const Pose& b, const Footprint& fp) {
  const Pose turn(a.position, b.heading);
  const std::array<Pose, 3> poses{a, turn, b};
  return swept_hulls(poses, fp, 0.0);
}

std::vector<Ring> pose_hull(const Pose& p, const Footprint& fp) {
  const auto c = footprint_corners(p, fp);
  return {Ring(c.begin(), c.end())};
}

// Trajectory of a static obstacle: one point valid across every window.
std::optional<Participant> add_static(const MutationContext& ctx, const Scenario& current, const MutationConfig& cfg,
                                      std::size_t windows, std::mt19937_64& rng) {
  const Footprint fp = cfg.static_footprint;
  Forbidden coarse(ctx, current, cfg.delta_t, cfg.clearance + fp.circumradius() + kSampleSlack);
  Forbidden exact(ctx, current, cfg.delta_t, cfg.clearance);

  auto accept = [&](const Point2& p) -> std::optional<Pose> {
    for (std::size_t w = 0; w <= windows; ++w) {
      if (!clear_of(coarse.window(w), p)) return std::nullopt;
    }
    const Pose pose(p, ctx.lane_heading(p));
    const auto hull = pose_hull(pose, fp);
    for (std::size_t w = 0; w <= windows; ++w) {
      if (!disjoint(hull, exact.window(w))) return std::nullopt;
    }
    return pose;
  };

  std::optional<Pose> found;
  for (int i = 0; i < cfg.max_samples && !found; ++i) found = accept(ctx.drivable().sample(rng));
  if (!found) {
    std::vector<Region> blocked;
    for (std::size_t w = 0; w <= windows; ++w) blocked.push_back(coarse.region(w));
    const Region feasible = region_difference(ctx.drivable().region(), region_union(blocked));
    if (feasible.empty()) return std::nullopt;
    const RegionSampler sampler(feasible);
    for (int i = 0; i < cfg.max_samples && !found; ++i) found = accept(sampler.sample(rng));
  }
  if (!found) return std::nullopt;

  Participant p;
  p.kind = ParticipantKind::StaticObstacle;
  p.footprint = fp;
  p.origin = ParticipantOrigin::Added;
  p.trajectory.push_back(Waypoint{0.0, found->position, found->heading, 0.0, 0.0});
  return p;
}

std::optional<Participant> add_npc(const MutationContext& ctx, const Scenario& current, const MutationConfig& cfg,
                                   std::size_t windows, std::mt19937_64& rng) {
  const Footprint fp = cfg.npc_footprint;
  Forbidden coarse(ctx, current, cfg.delta_t, cfg.clearance + fp.circumradius() + kSampleSlack);
  Forbidden exact(ctx, current, cfg.delta_t, cfg.clearance);
  const double radius = cfg.npc_speed_max * cfg.delta_t;

  // y_0: collision-free over the first window.
  auto accept_start = [&](const Point2& p) -> std::optional<Pose> {
    if (!clear_of(coarse.window(0), p)) return std::nullopt;
    const Pose pose(p, ctx.lane_heading(p));
    if (!disjoint(pose_hull(pose, fp), exact.window(0))) return std::nullopt;
    return pose;
  };
  std::optional<Pose> start;
  for (int i = 0; i < cfg.max_samples && !start; ++i) start = accept_start(ctx.drivable().sample(rng));
  if (!start) {
    const Region feasible = region_difference(ctx.drivable().region(), coarse.region(0));
    if (feasible.empty()) return std::nullopt;
    const RegionSampler sampler(feasible);
    for (int i = 0; i < cfg.max_samples && !start; ++i) start = accept_start(sampler.sample(rng));
  }
  if (!start) return std::nullopt;

  std::vector<Pose> poses{*start};
  for (std::size_t w = 0; w < windows; ++w) {
    const Pose& from = poses.back();
    auto accept = [&](const Point2& p) -> std::optional<Pose> {
      if (!contains(ctx.drivable().region(), p)) return std::nullopt;
      if (!clear_of(coarse.window(w), p) || !clear_of(coarse.window(w + 1), p)) return std::nullopt;
      const Pose to(p, bearing(from.position, p, from.heading));
      if (!disjoint(window_hulls(from, to, fp), exact.window(w))) return std::nullopt;
      return to;
    };
    const Ring ring = sector_ring(from, cfg.npc_speed_max, cfg.npc_steer_max, cfg.delta_t);
    std::optional<Pose> next;
    for (int i = 0; i < cfg.max_samples && !next; ++i)
      next = accept(draw_in_sector(from, radius, cfg.npc_steer_max, ring, rng));
    if (!next) {
      const std::array<Region, 2> blocked{coarse.region(w), coarse.region(w + 1)};
      const Region sector = Region::from_normalized({ring});
      const Region feasible =
          region_intersection(region_difference(sector, region_union(blocked)), ctx.drivable().region());
      if (feasible.empty()) return std::nullopt;
      const RegionSampler sampler(feasible);
      for (int i = 0; i < cfg.max_samples && !next; ++i) next = accept(sampler.sample(rng));
    }
    if (!next) return std::nullopt;
    poses.push_back(*next);
  }
  // Parked at the last waypoint from then on.
  if (!disjoint(pose_hull(poses.back(), fp), exact.window(windows))) return std::nullopt;

  Participant p;
  p.kind = ParticipantKind::NpcVehicle;
  p.footprint = fp;
  p.origin = ParticipantOrigin::Added;
  double prev_v = 0.0;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const std::size_t seg = std::max<std::size_t>(i, 1);
    const double v = (poses[seg].position - poses[seg - 1].position).norm() / cfg.delta_t;
    const double a = i == 0 ? 0.0 : (v - prev_v) / cfg.delta_t;
    double heading = poses[i].heading;
    if (i == 0 && poses.size() > 1) heading = poses[1].heading;
    p.trajectory.push_back(Waypoint{static_cast<double>(i) * cfg.delta_t, poses[i].position, heading, v, a});
    prev_v = v;
  }
  return p;
}

MutationOutcome unchanged(const Scenario& s, MutationOp op) { return MutationOutcome{s, op, true}; }

}  // namespace

const char* to_string(MutationOp op) {
  switch (op) {
    case MutationOp::Add: return "add";
    case MutationOp::Remove: return "remove";
    case MutationOp::Change: return "change";
  }
  return "unknown";
}

void MutationConfig::validate() const {
  if (!(delta_t > 0.0)) throw ConfigError("delta_t must be > 0");
  if (!(npc_speed_max > 0.0) || !(npc_steer_max > 0.0)) throw ConfigError("npc limits must be > 0");
  if (!(static_fraction >= 0.0 && static_fraction <= 1.0)) throw ConfigError("static_fraction must be in [0, 1]");
  double sum = 0.0;
  for (double w : op_weights) {
    if (!(w >= 0.0)) throw ConfigError("op_weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("op_weights must sum to 1");
  if (clearance < 0.0) throw ConfigError("clearance must be >= 0");
  if (max_samples < 1) throw ConfigError("max_samples must be >= 1");
}

MutationContext::MutationContext(RoadMap map, Scenario seed, Observation seed_obs, Footprint ego_footprint)
    : map_(std::move(map)),
      seed_(std::move(seed)),
      seed_obs_(std::move(seed_obs)),
      ego_footprint_(ego_footprint),
      drivable_(map_.drivable_area()) {
  for (const auto& lane : map_.lanes) {
    for (std::size_t i = 0; i + 1 < lane.centerline.size(); ++i)
      segments_.emplace_back(lane.centerline[i], lane.centerline[i + 1]);
  }
}

double MutationContext::horizon(const Scenario& s) const {
  double h = seed_obs_.duration();
  for (const auto& p : s.participants) {
    if (!p.trajectory.empty()) h = std::max(h, p.trajectory.back().t);
  }
  return h;
}

double MutationContext::lane_heading(const Point2& p) const {
  double best = std::numeric_limits<double>::infinity();
  double heading = 0.0;
  for (const auto& [a, b] : segments_) {
    const double d = point_segment_distance(p, a, b);
    if (d < best) {
      best = d;
      heading = std::atan2(b.y() - a.y(), b.x() - a.x());
    }
  }
  return heading;
}

Region non_invasive_area(const Pose& y_t, std::span<const Pose> ego_segment, std::span<const Participant> participants,
                         double t0, const MutationConfig& cfg, const Footprint& ego_footprint, double margin) {
  Region area = sector_from_state(y_t, cfg.npc_speed_max, cfg.npc_steer_max, cfg.delta_t);
  std::vector<Region> blocked;
  blocked.push_back(swept_region(ego_segment, ego_footprint, margin));
  for (const auto& p : participants) {
    const auto poses = participant_window_poses(p, t0, t0 + cfg.delta_t);
    blocked.push_back(swept_region(poses, p.footprint, margin));
  }
  return region_difference(area, region_union(blocked));
}

MutationOutcome mutate_add(const MutationContext& ctx, const Scenario& current, const MutationConfig& cfg,
                           std::mt19937_64& rng) {
  cfg.validate();
  if (added_count(current) >= cfg.max_added) throw Saturated("added participant limit reached");
  std::bernoulli_distribution is_static(cfg.static_fraction);
  const bool make_static = is_static(rng);
  const std::size_t windows = window_count(ctx.horizon(current), cfg.delta_t);
  auto added = make_static ? add_static(ctx, current, cfg, windows, rng) : add_npc(ctx, current, cfg, windows, rng);
  if (!added) return unchanged(current, MutationOp::Add);
  added->id = next_added_id(current);
  MutationOutcome out{current, MutationOp::Add, false};
  out.scenario.participants.push_back(std::move(*added));
  return out;
}

MutationOutcome mutate_remove(const Scenario& current, std::mt19937_64& rng) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < current.participants.size(); ++i) {
    if (current.participants[i].is_added()) candidates.push_back(i);
  }
  if (candidates.empty()) return unchanged(current, MutationOp::Remove);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  MutationOutcome out{current, MutationOp::Remove, false};
  out.scenario.participants.erase(out.scenario.participants.begin() + static_cast<std::ptrdiff_t>(candidates[pick(rng)]));
  return out;
}

MutationOutcome mutate_change(const MutationContext& ctx, const Scenario& current, const MutationConfig& cfg,
                              std::mt19937_64& rng) {
  const MutationOutcome removed = mutate_remove(current, rng);
  if (removed.aborted) return unchanged(current, MutationOp::Change);
  const MutationOutcome added = mutate_add(ctx, removed.scenario, cfg, rng);
  if (added.aborted) return unchanged(current, MutationOp::Change);
  return MutationOutcome{added.scenario, MutationOp::Change, false};
}

MutationOutcome mutate(const MutationContext& ctx, const Scenario& current, const MutationConfig& cfg,
                       std::mt19937_64& rng) {
  cfg.validate();
  std::array<double, 3> weights = cfg.op_weights;
  MutationOp last = MutationOp::Add;
  for (int attempt = 0; attempt < 3; ++attempt) {
    if (weights[0] + weights[1] + weights[2] <= 0.0) break;
    std::discrete_distribution<int> choose(weights.begin(), weights.end());
    const int k = choose(rng);
    last = static_cast<MutationOp>(k);
    weights[static_cast<std::size_t>(k)] = 0.0;
    try {
      MutationOutcome out;
      switch (last) {
        case MutationOp::Add: out = mutate_add(ctx, current, cfg, rng); break;
        case MutationOp::Remove: out = mutate_remove(current, rng); break;
        case MutationOp::Change: out = mutate_change(ctx, current, cfg, rng); break;
      }
      if (!out.aborted) return out;
    } catch (const Saturated&) {
    }
  }
  return unchanged(current, last);
}

MutationOutcome random_mutate(const MutationContext& ctx, const Scenario& current, const MutationConfig& cfg,
                              std::mt19937_64& rng) {
  cfg.validate();
  const std::size_t n_added = added_count(current);
  std::bernoulli_distribution coin(0.5);
  bool add = n_added == 0 || (n_added < cfg.max_added && coin(rng));
  if (!add) return mutate_remove(current, rng);

  std::bernoulli_distribution is_static(cfg.static_fraction);
  const bool make_static = is_static(rng);
  const Footprint fp = make_static ? cfg.static_footprint : cfg.npc_footprint;

  // Only the t = 0 snapshot is kept free of overlaps.
  std::vector<std::array<Point2, 4>> occupied{footprint_corners(current.task.start, ctx.ego_footprint())};
  for (const auto& p : current.participants) occupied.push_back(footprint_corners(replay_npc(p, 0.0).pose(), p.footprint));
  std::optional<Pose> start;
  for (int i = 0; i < cfg.max_samples && !start; ++i) {
    const Point2 q = ctx.drivable().sample(rng);
    const Pose pose(q, ctx.lane_heading(q));
    const auto box = footprint_corners(pose, fp);
    if (std::none_of(occupied.begin(), occupied.end(), [&](const auto& o) { return rectangles_overlap(box, o); }))
      start = pose;
  }
  if (!start) return unchanged(current, MutationOp::Add);

  Participant p;
  p.id = next_added_id(current);
  p.kind = make_static ? ParticipantKind::StaticObstacle : ParticipantKind::NpcVehicle;
  p.footprint = fp;
  p.origin = ParticipantOrigin::Added;
  if (make_static) {
    p.trajectory.push_back(Waypoint{0.0, start->position, start->heading, 0.0, 0.0});
  } else {
    const std::size_t windows = window_count(ctx.horizon(current), cfg.delta_t);
    const double radius = cfg.npc_speed_max * cfg.delta_t;
    std::vector<Pose> poses{*start};
    for (std::size_t w = 0; w < windows; ++w) {
      const Pose& from = poses.back();
      const Ring ring = sector_ring(from, cfg.npc_speed_max, cfg.npc_steer_max, cfg.delta_t);
      std::optional<Pose> next;
      for (int i = 0; i < cfg.max_samples && !next; ++i) {
        const Point2 q = draw_in_sector(from, radius, cfg.npc_steer_max, ring, rng);
        if (contains(ctx.drivable().region(), q)) next = Pose(q, bearing(from.position, q, from.heading));
      }
      if (!next) break;
      poses.push_back(*next);
    }
    double prev_v = 0.0;
    for (std::size_t i = 0; i < poses.size(); ++i) {
      double v = 0.0;
      if (poses.size() > 1) {
        const std::size_t seg = std::max<std::size_t>(i, 1);
        v = (poses[seg].position - poses[seg - 1].position).norm() / cfg.delta_t;
      }
      const double a = i == 0 ? 0.0 : (v - prev_v) / cfg.delta_t;
      double heading = poses[i].heading;
      if (i == 0 && poses.size() > 1) heading = poses[1].heading;
      p.trajectory.push_back(Waypoint{static_cast<double>(i) * cfg.delta_t, poses[i].position, heading, v, a});
      prev_v = v;
    }
  }
  MutationOutcome out{current, MutationOp::Add, false};
  out.scenario.participants.push_back(std::move(p));
  return out;
}

bool is_non_invasive(const MutationContext& ctx, const Scenario& s, const std::string& participant_id,
                     double delta_t) {
  const auto it = std::find_if(s.participants.begin(), s.participants.end(),
                               [&](const Participant& p) { return p.id == participant_id; });
  if (it == s.participants.end()) return false;
  const std::size_t windows = window_count(ctx.horizon(s), delta_t);
  for (std::size_t w = 0; w <= windows; ++w) {
    const double t0 = static_cast<double>(w) * delta_t;
    const double t1 = t0 + delta_t;
    const Region mine = swept_region(participant_window_poses(*it, t0, t1), it->footprint);
    const auto ego = ego_poses(ctx.seed_obs(), t0, t1);
    if (regions_overlap(mine, swept_region(ego, ctx.ego_footprint()))) return false;
    for (auto other = s.participants.begin(); other != it; ++other) {
      if (regions_overlap(mine, swept_region(participant_window_poses(*other, t0, t1), other->footprint))) return false;
    }
  }
  return true;
}

}  // namespace nods
