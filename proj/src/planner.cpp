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

#include "nods/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace nods {

namespace {

constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

Point2 move_direction(int k) { return Point2(kDx[k], kDy[k]).normalized(); }

}  // namespace

PlannerParams PlannerParams::defaults(const Footprint& ego) {
  PlannerParams p;
  p.ego_footprint = ego;
  p.block_radius = 0.5 * ego.width + 0.3;
  p.inflation_radius = p.block_radius + 1.2;
  return p;
}

PlannerParams PlannerParams::timid(const Footprint& ego) {
  PlannerParams p = defaults(ego);
  p.block_radius += 0.8;
  p.inflation_radius = p.block_radius + 1.2;
  return p;
}

PlannerParams PlannerParams::preset(std::string_view name, const Footprint& ego) {
  if (name == "default") return defaults(ego);
  if (name == "timid") return timid(ego);
  throw ConfigError("unknown planner preset: " + std::string(name));
}

ReferencePlanner::ReferencePlanner(const RoadMap& map, PlannerParams params) : params_(params) {
  if (!(params_.resolution > 0.0)) throw ConfigError("planner resolution must be > 0");
  const auto [lo, hi] = map.bounds();
  origin_ = lo;
  nx_ = std::max(1, static_cast<int>(std::ceil((hi.x() - lo.x()) / params_.resolution - 1e-9)));
  ny_ = std::max(1, static_cast<int>(std::ceil((hi.y() - lo.y()) / params_.resolution - 1e-9)));
  cells_.assign(static_cast<std::size_t>(nx_) * ny_, Cell{});

  const std::size_t n_lanes = map.lanes.size();
  neighbors_.assign(n_lanes, std::vector<bool>(n_lanes, false));
  for (std::size_t i = 0; i < n_lanes; ++i) {
    for (const auto* side : {&map.lanes[i].left_neighbor, &map.lanes[i].right_neighbor}) {
      if (!*side) continue;
      for (std::size_t j = 0; j < n_lanes; ++j) {
        if (map.lanes[j].id == **side) neighbors_[i][j] = neighbors_[j][i] = true;
      }
    }
  }

  const Region drivable = map.drivable_area();
  const double hw = 0.5 * params_.ego_footprint.width;
  Point2 dirs[8];
  for (int k = 0; k < 8; ++k) dirs[k] = move_direction(k);

  for (int iy = 0; iy < ny_; ++iy) {
    for (int ix = 0; ix < nx_; ++ix) {
      const Point2 c = center(ix, iy);
      Cell& cell = cells_[static_cast<std::size_t>(iy) * nx_ + ix];
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t li = 0; li < n_lanes; ++li) {
        const auto& cl = map.lanes[li].centerline;
        double d_lane = std::numeric_limits<double>::infinity();
        Point2 dir = Point2::UnitX();
        for (std::size_t s = 0; s + 1 < cl.size(); ++s) {
          const double d = point_segment_distance(c, cl[s], cl[s + 1]);
          if (d < d_lane) {
            d_lane = d;
            dir = (cl[s + 1] - cl[s]).normalized();
          }
        }
        if (d_lane > 0.5 * map.lanes[li].width + 1e-9) continue;
        for (int k = 0; k < 8; ++k) {
          if (dir.dot(dirs[k]) >= -0.2) cell.allowed |= static_cast<std::uint8_t>(1u << k);
        }
        if (d_lane < best) {
          best = d_lane;
          cell.lane = static_cast<std::int16_t>(li);
        }
      }
      if (cell.lane < 0) continue;
      cell.offset = static_cast<float>(best);
      cell.valid = contains(drivable, c) && contains(drivable, c + Point2(hw, 0)) &&
                   contains(drivable, c - Point2(hw, 0)) && contains(drivable, c + Point2(0, hw)) &&
                   contains(drivable, c - Point2(0, hw));
    }
  }
}

Point2 ReferencePlanner::center(int ix, int iy) const {
  return origin_ + Point2((ix + 0.5) * params_.resolution, (iy + 0.5) * params_.resolution);
}

ReferencePlanner::Search ReferencePlanner::search(const WorldView& view) const {
  const std::size_t n = cells_.size();
  const double res = params_.resolution;

  // Distance from every cell center to the nearest obstacle footprint,
  // current and predicted.
  std::vector<float> dist(n, std::numeric_limits<float>::infinity());
  const double reach = std::max(params_.inflation_radius, params_.block_radius);
  auto stamp = [&](const Pose& pose, const Footprint& fp) {
    const double r = fp.circumradius() + reach;
    const int x0 = std::max(0, static_cast<int>(std::floor((pose.position.x() - r - origin_.x()) / res)));
    const int x1 = std::min(nx_ - 1, static_cast<int>(std::floor((pose.position.x() + r - origin_.x()) / res)));
    const int y0 = std::max(0, static_cast<int>(std::floor((pose.position.y() - r - origin_.y()) / res)));
    const int y1 = std::min(ny_ - 1, static_cast<int>(std::floor((pose.position.y() + r - origin_.y()) / res)));
    for (int iy = y0; iy <= y1; ++iy) {
      for (int ix = x0; ix <= x1; ++ix) {
        const std::size_t idx = static_cast<std::size_t>(iy) * nx_ + ix;
        if (!cells_[idx].valid) continue;
        const auto d = static_cast<float>(point_rectangle_distance(center(ix, iy), pose, fp));
        dist[idx] = std::min(dist[idx], d);
      }
    }
  };
  for (const auto& p : view.participants) {
    stamp(p.current.pose(), p.footprint);
    for (const auto& w : p.predicted) stamp(w.pose(), p.footprint);
  }

  auto blocked = [&](std::size_t idx) {
    if (dist[idx] >= params_.block_radius) return false;
    const int ix = static_cast<int>(idx % nx_);
    const int iy = static_cast<int>(idx / nx_);
    return (center(ix, iy) - view.ego.position).norm() > params_.departure_radius;
  };
  auto incursion = [&](std::size_t idx) {
    return std::max(0.0, params_.inflation_radius - static_cast<double>(dist[idx]));
  };

  // Start: the ego's cell, or the nearest valid cell within 1.5 m.
  const Point2 ego = view.ego.position;
  std::int64_t start = -1;
  {
    double best = std::numeric_limits<double>::infinity();
    const int cx = static_cast<int>(std::floor((ego.x() - origin_.x()) / res));
    const int cy = static_cast<int>(std::floor((ego.y() - origin_.y()) / res));
    const int span = static_cast<int>(std::ceil(1.5 / res));
    for (int iy = std::max(0, cy - span); iy <= std::min(ny_ - 1, cy + span); ++iy) {
      for (int ix = std::max(0, cx - span); ix <= std::min(nx_ - 1, cx + span); ++ix) {
        const std::size_t idx = static_cast<std::size_t>(iy) * nx_ + ix;
        if (!cells_[idx].valid) continue;
        const double d = (center(ix, iy) - ego).norm();
        if (d <= 1.5 && d < best) {
          best = d;
          start = static_cast<std::int64_t>(idx);
        }
      }
    }
  }
  if (start < 0) throw NoRoute("ego is off the drivable lattice");

  const double goal_r = std::max(res, 0.5 * view.goal_radius);
  auto is_goal = [&](int ix, int iy) { return (center(ix, iy) - view.destination).norm() <= goal_r; };
  auto heuristic = [&](int ix, int iy) {
    return std::max(0.0, (center(ix, iy) - view.destination).norm() - goal_r);
  };

  std::vector<double> g(n, std::numeric_limits<double>::infinity());
  std::vector<std::int32_t> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  using Entry = std::tuple<double, int, int>;  // (f, iy, ix), smallest first
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  const auto s = static_cast<std::size_t>(start);
  g[s] = 0.0;
  open.emplace(heuristic(static_cast<int>(s % nx_), static_cast<int>(s / nx_)), static_cast<int>(s / nx_),
               static_cast<int>(s % nx_));

  std::int64_t goal = -1;
  while (!open.empty()) {
    const auto [f, iy, ix] = open.top();
    open.pop();
    const std::size_t cur = static_cast<std::size_t>(iy) * nx_ + ix;
    if (closed[cur]) continue;
    closed[cur] = 1;
    if (is_goal(ix, iy) && (cur == s || !blocked(cur))) {
      goal = static_cast<std::int64_t>(cur);
      break;
    }
    const Cell& from = cells_[cur];
    for (int k = 0; k < 8; ++k) {
      const int jx = ix + kDx[k];
      const int jy = iy + kDy[k];
      if (jx < 0 || jy < 0 || jx >= nx_ || jy >= ny_) continue;
      const std::size_t nxt = static_cast<std::size_t>(jy) * nx_ + jx;
      const Cell& to = cells_[nxt];
      if (!to.valid || closed[nxt] || blocked(nxt)) continue;
      const double len = (k % 2 == 0) ? res : res * std::sqrt(2.0);
      double cost = len * (1.0 + params_.centering_weight * to.offset + params_.obstacle_weight * incursion(nxt));
      if (!(from.allowed & (1u << k))) cost += params_.wrong_way_weight * len;
      if (from.lane != to.lane && from.lane >= 0 && to.lane >= 0 && neighbors_[from.lane][to.lane])
        cost += params_.lane_change_cost;
      const double cand = g[cur] + cost;
      if (cand < g[nxt]) {
        g[nxt] = cand;
        parent[nxt] = static_cast<std::int32_t>(cur);
        open.emplace(cand + heuristic(jx, jy), jy, jx);
      }
    }
  }
  if (goal < 0) throw NoRoute("no lattice path to the destination");

  Search out;
  out.cost = g[static_cast<std::size_t>(goal)];
  for (std::int64_t c = goal; c >= 0; c = parent[static_cast<std::size_t>(c)]) out.path.push_back(static_cast<std::int32_t>(c));
  std::reverse(out.path.begin(), out.path.end());
  out.incursion.reserve(out.path.size());
  for (auto c : out.path) out.incursion.push_back(static_cast<float>(incursion(static_cast<std::size_t>(c))));
  return out;
}

PlannedPath ReferencePlanner::plan(const WorldView& view) const {
  const Search found = search(view);
  PlannedPath path;
  path.points.push_back(view.ego.position);
  path.speeds.push_back(params_.cruise_speed / (1.0 + params_.slowdown_per_incursion * found.incursion.front()));
  for (std::size_t i = 0; i < found.path.size(); ++i) {
    const int idx = found.path[i];
    const Point2 c = center(idx % nx_, idx / nx_);
    if (i == 0 && (c - view.ego.position).norm() < 1e-9) continue;
    path.points.push_back(c);
    path.speeds.push_back(params_.cruise_speed / (1.0 + params_.slowdown_per_incursion * found.incursion[i]));
  }
  if (path.points.size() < 2) {
    // Already at the goal cell: keep heading toward the destination.
    path.points.push_back(view.destination);
    path.speeds.push_back(path.speeds.front());
  }
  return path;
}

double ReferencePlanner::route_cost(const WorldView& view) const {
  try {
    return search(view).cost;
  } catch (const NoRoute&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace nods
