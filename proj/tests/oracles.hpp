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

// Brute-force reference computations shared by the unit tests and the
// acceptance harness. Nothing here calls into the library's geometry,
// oracle or feedback code; the point is an independent second opinion.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "nods/geometry.hpp"
#include "nods/scenario.hpp"

namespace oracle {

using nods::Footprint;
using nods::Point2;
using nods::Pose;

inline double wrap(double a) {
  a = std::fmod(a + std::numbers::pi, 2.0 * std::numbers::pi);
  if (a <= 0.0) a += 2.0 * std::numbers::pi;
  return a - std::numbers::pi;
}

inline bool in_sector(const Point2& p, const Pose& pose, double radius, double half_angle) {
  const Point2 d = p - pose.position;
  if (d.norm() > radius) return false;
  if (d.norm() == 0.0) return true;
  return std::abs(wrap(std::atan2(d.y(), d.x()) - pose.heading)) <= half_angle;
}

inline std::array<Point2, 4> corners(const Pose& pose, const Footprint& fp) {
  const Point2 f(std::cos(pose.heading), std::sin(pose.heading));
  const Point2 l(-f.y(), f.x());
  const Point2 a = 0.5 * fp.length * f;
  const Point2 b = 0.5 * fp.width * l;
  const Point2& c = pose.position;
  return {c - a - b, c + a - b, c + a + b, c - a + b};
}

inline bool in_rect(const Point2& p, const Pose& pose, const Footprint& fp) {
  const Point2 d = p - pose.position;
  const double u = d.x() * std::cos(pose.heading) + d.y() * std::sin(pose.heading);
  const double v = -d.x() * std::sin(pose.heading) + d.y() * std::cos(pose.heading);
  return std::abs(u) <= 0.5 * fp.length && std::abs(v) <= 0.5 * fp.width;
}

inline double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Andrew's monotone chain, CCW.
inline std::vector<Point2> hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

inline bool in_convex(const std::vector<Point2>& h, const Point2& p) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (cross(h[i], h[(i + 1) % h.size()], p) < 0) return false;
  }
  return true;
}

// Swept area of a footprint along consecutive poses.
inline std::vector<std::vector<Point2>> swept_pieces(const std::vector<Pose>& poses, const Footprint& fp) {
  std::vector<std::vector<Point2>> out;
  if (poses.size() == 1) {
    const auto c = corners(poses[0], fp);
    out.push_back(hull({c.begin(), c.end()}));
  }
  for (std::size_t i = 0; i + 1 < poses.size(); ++i) {
    const auto a = corners(poses[i], fp);
    const auto b = corners(poses[i + 1], fp);
    std::vector<Point2> pts(a.begin(), a.end());
    pts.insert(pts.end(), b.begin(), b.end());
    out.push_back(hull(pts));
  }
  return out;
}

inline bool in_pieces(const std::vector<std::vector<Point2>>& pieces, const Point2& p) {
  return std::any_of(pieces.begin(), pieces.end(), [&](const auto& h) { return in_convex(h, p); });
}

// Separating-axis test with a positive gap: true when the closed convex
// polygons are strictly apart.
inline bool separated(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  auto apart_on = [](const std::vector<Point2>& edges_of, const std::vector<Point2>& a, const std::vector<Point2>& b) {
    for (std::size_t i = 0; i < edges_of.size(); ++i) {
      const Point2 e = edges_of[(i + 1) % edges_of.size()] - edges_of[i];
      const Point2 n(-e.y(), e.x());
      double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
      for (const auto& p : a) {
        amin = std::min(amin, n.dot(p));
        amax = std::max(amax, n.dot(p));
      }
      for (const auto& p : b) {
        bmin = std::min(bmin, n.dot(p));
        bmax = std::max(bmax, n.dot(p));
      }
      if (amax < bmin || bmax < amin) return true;
    }
    return false;
  };
  return apart_on(a, a, b) || apart_on(b, a, b);
}

// Fraction of 0.05 m cells, over the box [lo, hi], on which two membership
// predicates agree.
template <typename A, typename B>
double raster_agreement(const Point2& lo, const Point2& hi, A&& polygon_side, B&& oracle_side, double cell = 0.05) {
  const int nx = std::max(1, static_cast<int>(std::ceil((hi.x() - lo.x()) / cell)));
  const int ny = std::max(1, static_cast<int>(std::ceil((hi.y() - lo.y()) / cell)));
  std::size_t agree = 0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Point2 c(lo.x() + (i + 0.5) * cell, lo.y() + (j + 0.5) * cell);
      if (polygon_side(c) == oracle_side(c)) ++agree;
    }
  }
  return static_cast<double>(agree) / (static_cast<double>(nx) * ny);
}

using Cell = std::pair<long long, long long>;

// Cells visited by a polyline, sampled every `step` meters.
inline std::set<Cell> dense_cells(const std::vector<Point2>& pts, const Point2& origin, double size, double step = 0.01) {
  std::set<Cell> out;
  auto add = [&](const Point2& p) {
    out.insert({static_cast<long long>(std::floor((p.x() - origin.x()) / size)),
                static_cast<long long>(std::floor((p.y() - origin.y()) / size))});
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    add(pts[i]);
    if (i + 1 == pts.size()) break;
    const double len = (pts[i + 1] - pts[i]).norm();
    const int n = static_cast<int>(std::ceil(len / step));
    for (int k = 1; k < n; ++k) add(pts[i] + (pts[i + 1] - pts[i]) * (static_cast<double>(k) / n));
  }
  return out;
}

inline double jaccard(const std::set<Cell>& a, const std::set<Cell>& b) {
  std::size_t inter = 0;
  for (const auto& c : a) inter += b.count(c);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

using Rows = std::vector<std::array<double, 3>>;

inline double sq_dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

// Biased MMD with an RBF kernel of bandwidth sigma, straight double sums.
inline double mmd_double_sum(const Rows& x, const Rows& y, double sigma) {
  auto k = [&](const auto& a, const auto& b) { return std::exp(-sq_dist(a, b) / (2.0 * sigma * sigma)); };
  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (const auto& a : x)
    for (const auto& b : x) xx += k(a, b);
  for (const auto& a : y)
    for (const auto& b : y) yy += k(a, b);
  for (const auto& a : x)
    for (const auto& b : y) xy += k(a, b);
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  return std::sqrt(std::max(0.0, xx / (n * n) + yy / (m * m) - 2.0 * xy / (n * m)));
}

inline double median_pairwise(const Rows& x, const Rows& y) {
  Rows all = x;
  all.insert(all.end(), y.begin(), y.end());
  std::vector<double> d;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) d.push_back(std::sqrt(sq_dist(all[i], all[j])));
  if (d.empty()) return 1.0;
  std::sort(d.begin(), d.end());
  const double med = d.size() % 2 ? d[d.size() / 2] : 0.5 * (d[d.size() / 2 - 1] + d[d.size() / 2]);
  return med > 0.0 ? med : 1.0;
}

// Mean over b of the distance to the closest point of a.
inline double mean_nearest(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  double sum = 0.0;
  for (const auto& p : b) {
    double best = 1e300;
    for (const auto& q : a) best = std::min(best, (p - q).norm());
    sum += best;
  }
  return sum / static_cast<double>(b.size());
}

// Exact Euler sums of the bicycle update under constant speed and steer.
struct BicycleClosedForm {
  double x, y, heading;
};

inline BicycleClosedForm bicycle_after(double x0, double y0, double h0, double v, double steer, double dt, double wheelbase,
                                       int n) {
  const double w = v / wheelbase * std::tan(steer) * dt;  // heading change per step
  double sx, sy;
  if (std::abs(w) < 1e-15) {
    sx = n * std::cos(h0);
    sy = n * std::sin(h0);
  } else {
    const double r = std::sin(0.5 * n * w) / std::sin(0.5 * w);
    sx = r * std::cos(h0 + 0.5 * (n - 1) * w);
    sy = r * std::sin(h0 + 0.5 * (n - 1) * w);
  }
  return {x0 + v * dt * sx, y0 + v * dt * sy, h0 + n * w};
}

// Participant pose at time t: linear position between waypoints, heading of
// the segment's end waypoint, clamped at both ends.
inline Pose participant_pose(const nods::Participant& p, double t) {
  const auto& w = p.trajectory;
  if (p.is_static() || w.size() == 1 || t <= w.front().t) return w.front().pose();
  if (t >= w.back().t) return w.back().pose();
  std::size_t k = 1;
  while (w[k].t < t) ++k;
  const double u = (t - w[k - 1].t) / (w[k].t - w[k - 1].t);
  return Pose(w[k - 1].position + u * (w[k].position - w[k - 1].position), w[k].heading);
}

// Poses every 0.05 s over [t0, t1] plus both sides of each waypoint inside.
inline std::vector<Pose> dense_participant_poses(const nods::Participant& p, double t0, double t1) {
  std::vector<double> ts;
  for (double t = t0; t < t1; t += 0.05) ts.push_back(t);
  ts.push_back(t1);
  for (const auto& w : p.trajectory) {
    if (w.t > t0 && w.t < t1) {
      ts.push_back(w.t);
      ts.push_back(std::min(t1, w.t + 1e-9));
    }
  }
  std::sort(ts.begin(), ts.end());
  std::vector<Pose> out;
  for (double t : ts) out.push_back(participant_pose(p, t));
  return out;
}

inline std::vector<Pose> recorded_ego(const nods::Observation& obs, double t0, double t1) {
  std::vector<Pose> out;
  for (const auto& s : obs.scenes)
    if (s.t >= t0 - 1e-9 && s.t <= t1 + 1e-9) out.push_back(s.ego.pose());
  if (out.empty()) out.push_back(obs.scenes.back().ego.pose());
  return out;
}

inline bool pieces_apart(const std::vector<std::vector<Point2>>& a, const std::vector<std::vector<Point2>>& b) {
  for (const auto& pa : a)
    for (const auto& pb : b)
      if (!separated(pa, pb)) return false;
  return true;
}

// True when participant `idx` stays strictly clear of the recorded ego and of
// every participant listed before it, window by window.
inline bool disjoint_per_window(const nods::Scenario& s, std::size_t idx, const nods::Observation& obs,
                                double delta_t, const Footprint& ego_fp = Footprint{}) {
  double horizon = obs.scenes.back().t;
  for (const auto& p : s.participants) horizon = std::max(horizon, p.trajectory.back().t);
  const auto& me = s.participants[idx];
  for (double t0 = 0.0; t0 <= horizon + delta_t; t0 += delta_t) {
    const double t1 = t0 + delta_t;
    const auto mine = swept_pieces(dense_participant_poses(me, t0, t1), me.footprint);
    if (!pieces_apart(mine, swept_pieces(recorded_ego(obs, t0, t1), ego_fp))) return false;
    for (std::size_t k = 0; k < idx; ++k) {
      const auto& other = s.participants[k];
      if (!pieces_apart(mine, swept_pieces(dense_participant_poses(other, t0, t1), other.footprint))) return false;
    }
  }
  return true;
}

}  // namespace oracle
