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

#include "nods/geometry.hpp"

#include <algorithm>
#include <numbers>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/box.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

namespace nods {

namespace bg = boost::geometry;

namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint, /*ClockWise=*/false, /*Closed=*/true>;
using BMulti = bg::model::multi_polygon<BPolygon>;
using BBox = bg::model::box<BPoint>;

constexpr double kSnap = 1e-7;
constexpr double kMinArea = 1e-9;

double snap(double v) { return std::round(v / kSnap) * kSnap; }

BPolygon to_boost(const Ring& ring) {
  BPolygon poly;
  auto& outer = poly.outer();
  outer.reserve(ring.size() + 1);
  for (const auto& p : ring) outer.emplace_back(snap(p.x()), snap(p.y()));
  outer.emplace_back(snap(ring.front().x()), snap(ring.front().y()));
  bg::unique(poly);
  bg::correct(poly);
  return poly;
}

BMulti to_boost(const Region& region) {
  BMulti out;
  out.reserve(region.polygons().size());
  for (const auto& ring : region.polygons()) out.push_back(to_boost(ring));
  return out;
}

Ring ring_from_boost(const BPolygon::ring_type& r) {
  Ring ring;
  ring.reserve(r.size());
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    Point2 p(snap(r[i].x()), snap(r[i].y()));
    if (!ring.empty() && (ring.back() - p).norm() < 0.5 * kSnap) continue;
    ring.push_back(p);
  }
  while (ring.size() > 1 && (ring.back() - ring.front()).norm() < 0.5 * kSnap) ring.pop_back();
  return ring;
}

BBox ring_box(const BPolygon::ring_type& r) {
  double x0 = r.front().x(), x1 = x0, y0 = r.front().y(), y1 = y0;
  for (const auto& p : r) {
    x0 = std::min(x0, p.x());
    x1 = std::max(x1, p.x());
    y0 = std::min(y0, p.y());
    y1 = std::max(y1, p.y());
  }
  return BBox(BPoint(x0, y0), BPoint(x1, y1));
}

// Cuts a holed polygon at the mid-x of its first hole until no holes remain.
void split_holes(const BPolygon& poly, std::vector<BPolygon>& out) {
  if (poly.inners().empty()) {
    out.push_back(poly);
    return;
  }
  const BBox hole_box = ring_box(poly.inners().front());
  const BBox poly_box = ring_box(poly.outer());
  const double cut = 0.5 * (hole_box.min_corner().x() + hole_box.max_corner().x());
  const double lo_y = poly_box.min_corner().y() - 1.0;
  const double hi_y = poly_box.max_corner().y() + 1.0;
  const BBox left(BPoint(poly_box.min_corner().x() - 1.0, lo_y), BPoint(cut, hi_y));
  const BBox right(BPoint(cut, lo_y), BPoint(poly_box.max_corner().x() + 1.0, hi_y));
  for (const auto& half : {left, right}) {
    BMulti piece;
    bg::intersection(poly, half, piece);
    for (const auto& p : piece) split_holes(p, out);
  }
}

Region from_boost(const BMulti& multi) {
  std::vector<BPolygon> flat;
  for (const auto& poly : multi) split_holes(poly, flat);
  std::vector<Ring> rings;
  rings.reserve(flat.size());
  for (const auto& poly : flat) {
    Ring ring = ring_from_boost(poly.outer());
    if (ring.size() < 3) continue;
    double a = ring_area(ring);
    if (a < 0) {
      std::reverse(ring.begin(), ring.end());
      a = -a;
    }
    if (a <= kMinArea) continue;
    rings.push_back(std::move(ring));
  }
  return Region::from_normalized(std::move(rings));
}

BMulti union_tree(std::vector<BMulti> parts) {
  if (parts.empty()) return {};
  while (parts.size() > 1) {
    std::vector<BMulti> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      BMulti merged;
      bg::union_(parts[i], parts[i + 1], merged);
      next.push_back(std::move(merged));
    }
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

double normalize_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

double ring_area(const Ring& ring) {
  double twice = 0.0;
  for (std::size_t i = 0, n = ring.size(); i < n; ++i) twice += cross(ring[i], ring[(i + 1) % n]);
  return 0.5 * twice;
}

Region Region::from_rings(std::vector<Ring> rings) {
  std::vector<BMulti> parts;
  parts.reserve(rings.size());
  for (const auto& ring : rings) {
    if (ring.size() < 3 || std::abs(ring_area(ring)) <= kMinArea) continue;
    parts.push_back(BMulti{to_boost(ring)});
  }
  return from_boost(union_tree(std::move(parts)));
}

Region Region::from_normalized(std::vector<Ring> rings) {
  Region r;
  r.polygons_ = std::move(rings);
  return r;
}

double Region::area() const {
  double total = 0.0;
  for (const auto& ring : polygons_) total += ring_area(ring);
  return total;
}

std::pair<Point2, Point2> Region::bounds() const {
  if (polygons_.empty()) return {Point2::Zero(), Point2::Zero()};
  Point2 lo = polygons_.front().front();
  Point2 hi = lo;
  for (const auto& ring : polygons_) {
    for (const auto& p : ring) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  }
  return {lo, hi};
}

std::array<Point2, 4> footprint_corners(const Pose& pose, const Footprint& fp, double inflation) {
  const Point2 f = pose.forward();
  const Point2 l(-f.y(), f.x());
  const double hl = 0.5 * fp.length + inflation;
  const double hw = 0.5 * fp.width + inflation;
  const Point2& c = pose.position;
  return {c - hl * f - hw * l, c + hl * f - hw * l, c + hl * f + hw * l, c - hl * f + hw * l};
}

Region rectangle(const Pose& pose, const Footprint& fp, double inflation) {
  const auto corners = footprint_corners(pose, fp, inflation);
  return Region::from_rings({Ring(corners.begin(), corners.end())});
}

Region convex_hull(std::span<const Point2> points) {
  if (points.size() < 3) return {};
  bg::model::multi_point<BPoint> mp;
  for (const auto& p : points) mp.emplace_back(snap(p.x()), snap(p.y()));
  BPolygon hull;
  bg::convex_hull(mp, hull);
  return from_boost(BMulti{hull});
}

Region sector_from_state(const Pose& pose, double speed_max, double steer_max, double dt, int chords) {
  const double radius = speed_max * dt;
  if (!(radius > 0.0) || !(steer_max > 0.0)) return {};
  chords = std::max(chords, 32);
  Ring ring;
  ring.reserve(static_cast<std::size_t>(chords) + 2);
  ring.push_back(pose.position);
  for (int i = 0; i <= chords; ++i) {
    const double a = pose.heading - steer_max + 2.0 * steer_max * i / chords;
    ring.emplace_back(pose.position + radius * Point2(std::cos(a), std::sin(a)));
  }
  return Region::from_rings({std::move(ring)});
}

Ring convex_hull_ring(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  // Andrew's monotone chain; collinear points are dropped.
  Ring hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Ring> swept_hulls(std::span<const Pose> path_segment, const Footprint& fp, double inflation) {
  std::vector<Ring> out;
  if (path_segment.size() == 1) {
    const auto c = footprint_corners(path_segment.front(), fp, inflation);
    out.emplace_back(c.begin(), c.end());
    return out;
  }
  for (std::size_t i = 0; i + 1 < path_segment.size(); ++i) {
    const auto a = footprint_corners(path_segment[i], fp, inflation);
    const auto b = footprint_corners(path_segment[i + 1], fp, inflation);
    std::vector<Point2> pts(a.begin(), a.end());
    pts.insert(pts.end(), b.begin(), b.end());
    out.push_back(convex_hull_ring(std::move(pts)));
  }
  return out;
}

Region swept_region(std::span<const Pose> path_segment, const Footprint& fp, double inflation) {
  std::vector<BMulti> parts;
  for (const auto& hull : swept_hulls(path_segment, fp, inflation)) parts.push_back(BMulti{to_boost(hull)});
  return from_boost(union_tree(std::move(parts)));
}

bool convex_contains(const Ring& hull, const Point2& p) {
  if (hull.size() < 3) return false;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (cross(hull[(i + 1) % hull.size()] - hull[i], p - hull[i]) < 0) return false;
  }
  return true;
}

bool convex_overlap(const Ring& a, const Ring& b) {
  auto separated = [](const Ring& p, const Ring& q) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Point2 edge = p[(i + 1) % p.size()] - p[i];
      const Point2 axis(-edge.y(), edge.x());
      double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
      double qmin = pmin, qmax = -pmin;
      for (const auto& v : p) {
        pmin = std::min(pmin, v.dot(axis));
        pmax = std::max(pmax, v.dot(axis));
      }
      for (const auto& v : q) {
        qmin = std::min(qmin, v.dot(axis));
        qmax = std::max(qmax, v.dot(axis));
      }
      if (pmax < qmin || qmax < pmin) return true;
    }
    return false;
  };
  if (a.empty() || b.empty()) return false;
  return !separated(a, b) && !separated(b, a);
}

double convex_distance(const Ring& a, const Ring& b) {
  if (convex_overlap(a, b)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      best = std::min(best, point_segment_distance(a[i], b[j], b[(j + 1) % b.size()]));
      best = std::min(best, point_segment_distance(b[j], a[i], a[(i + 1) % a.size()]));
    }
  }
  return best;
}

Region region_union(const Region& a, const Region& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  BMulti out;
  bg::union_(to_boost(a), to_boost(b), out);
  return from_boost(out);
}

Region region_union(std::span<const Region> regions) {
  std::vector<BMulti> parts;
  parts.reserve(regions.size());
  for (const auto& r : regions) {
    if (!r.empty()) parts.push_back(to_boost(r));
  }
  return from_boost(union_tree(std::move(parts)));
}

Region region_difference(const Region& a, const Region& b) {
  if (a.empty() || b.empty()) return a;
  BMulti out;
  bg::difference(to_boost(a), to_boost(b), out);
  return from_boost(out);
}

Region region_intersection(const Region& a, const Region& b) {
  if (a.empty() || b.empty()) return {};
  BMulti out;
  bg::intersection(to_boost(a), to_boost(b), out);
  return from_boost(out);
}

Region region_intersection(std::span<const Region> regions) {
  if (regions.empty()) return {};
  Region acc = regions.front();
  for (std::size_t i = 1; i < regions.size() && !acc.empty(); ++i) acc = region_intersection(acc, regions[i]);
  return acc;
}

bool regions_overlap(const Region& a, const Region& b, double area_tol) {
  if (a.empty() || b.empty()) return false;
  const auto [alo, ahi] = a.bounds();
  const auto [blo, bhi] = b.bounds();
  if ((ahi.array() < blo.array()).any() || (bhi.array() < alo.array()).any()) return false;
  return region_intersection(a, b).area() > area_tol;
}

bool contains(const Region& region, const Point2& p) {
  for (const auto& ring : region.polygons()) {
    bool inside = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
      const Point2& a = ring[i];
      const Point2& b = ring[j];
      if ((a.y() > p.y()) != (b.y() > p.y())) {
        const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
        if (p.x() < x) inside = !inside;
      }
    }
    if (inside) return true;
  }
  return false;
}

std::vector<std::array<Point2, 3>> triangulate(const Ring& ring) {
  std::vector<std::array<Point2, 3>> tris;
  std::vector<Point2> v;
  v.reserve(ring.size());
  for (const auto& p : ring) v.push_back(p);
  if (ring_area(v) < 0) std::reverse(v.begin(), v.end());

  auto inside_tri = [](const Point2& p, const Point2& a, const Point2& b, const Point2& c) {
    return cross(b - a, p - a) >= 0 && cross(c - b, p - b) >= 0 && cross(a - c, p - c) >= 0;
  };

  std::size_t guard = 0;
  while (v.size() > 3 && guard++ < 4 * ring.size() * ring.size() + 16) {
    const std::size_t n = v.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& a = v[(i + n - 1) % n];
      const Point2& b = v[i];
      const Point2& c = v[(i + 1) % n];
      const double turn = cross(b - a, c - b);
      if (turn <= 1e-14) {
        if (std::abs(turn) <= 1e-14) {
          // Collinear vertex contributes no area.
          v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
          clipped = true;
          break;
        }
        continue;
      }
      bool ear = true;
      for (std::size_t k = 0; k < n && ear; ++k) {
        if (k == i || k == (i + 1) % n || k == (i + n - 1) % n) continue;
        if (v[k] == a || v[k] == b || v[k] == c) continue;
        if (inside_tri(v[k], a, b, c)) ear = false;
      }
      if (!ear) continue;
      tris.push_back({a, b, c});
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) break;
  }
  if (v.size() == 3 && cross(v[1] - v[0], v[2] - v[1]) > 0) tris.push_back({v[0], v[1], v[2]});
  return tris;
}

RegionSampler::RegionSampler(const Region& region) : region_(region) {
  for (const auto& ring : region_.polygons()) {
    auto t = triangulate(ring);
    tris_.insert(tris_.end(), t.begin(), t.end());
  }
  cumulative_.reserve(tris_.size());
  double total = 0.0;
  for (const auto& t : tris_) {
    total += 0.5 * std::abs(cross(t[1] - t[0], t[2] - t[0]));
    cumulative_.push_back(total);
  }
}

double RegionSampler::area() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

Point2 RegionSampler::sample(std::mt19937_64& rng) const {
  if (!(area() > 0.0)) throw EmptyRegion("sample_point: region has zero area");
  const double total = area();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double pick = unit(rng) * total;
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), pick);
    const auto& t = tris_[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), tris_.size() - 1)];
    double r1 = unit(rng);
    double r2 = unit(rng);
    if (r1 + r2 > 1.0) {
      r1 = 1.0 - r1;
      r2 = 1.0 - r2;
    }
    const Point2 p = t[0] + r1 * (t[1] - t[0]) + r2 * (t[2] - t[0]);
    if (contains(region_, p)) return p;
  }
  // Centroid of the largest triangle is always interior.
  std::size_t best = 0;
  double best_area = -1.0;
  for (std::size_t i = 0; i < tris_.size(); ++i) {
    const double a = std::abs(cross(tris_[i][1] - tris_[i][0], tris_[i][2] - tris_[i][0]));
    if (a > best_area) {
      best_area = a;
      best = i;
    }
  }
  return (tris_[best][0] + tris_[best][1] + tris_[best][2]) / 3.0;
}

Point2 sample_point(const Region& region, std::mt19937_64& rng) {
  if (region.area() <= 0.0) throw EmptyRegion("sample_point: region has zero area");
  return RegionSampler(region).sample(rng);
}

bool rectangles_overlap(const std::array<Point2, 4>& a, const std::array<Point2, 4>& b) {
  auto separated_on = [](const std::array<Point2, 4>& p, const std::array<Point2, 4>& q, const Point2& axis) {
    double pmin = p[0].dot(axis), pmax = pmin;
    double qmin = q[0].dot(axis), qmax = qmin;
    for (int i = 1; i < 4; ++i) {
      pmin = std::min(pmin, p[i].dot(axis));
      pmax = std::max(pmax, p[i].dot(axis));
      qmin = std::min(qmin, q[i].dot(axis));
      qmax = std::max(qmax, q[i].dot(axis));
    }
    return pmax < qmin || qmax < pmin;
  };
  for (const auto* quad : {&a, &b}) {
    for (int i = 0; i < 2; ++i) {
      const Point2 edge = (*quad)[i + 1] - (*quad)[i];
      const Point2 axis(-edge.y(), edge.x());
      if (separated_on(a, b, axis)) return false;
    }
  }
  return true;
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const Point2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double rectangle_distance(const std::array<Point2, 4>& a, const std::array<Point2, 4>& b) {
  if (rectangles_overlap(a, b)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      best = std::min(best, point_segment_distance(a[i], b[j], b[(j + 1) % 4]));
      best = std::min(best, point_segment_distance(b[i], a[j], a[(j + 1) % 4]));
    }
  }
  return best;
}

double point_rectangle_distance(const Point2& p, const Pose& pose, const Footprint& fp) {
  const Point2 f = pose.forward();
  const Point2 d = p - pose.position;
  const double along = std::abs(d.dot(f)) - 0.5 * fp.length;
  const double across = std::abs(f.x() * d.y() - f.y() * d.x()) - 0.5 * fp.width;
  const double ox = std::max(along, 0.0);
  const double oy = std::max(across, 0.0);
  return std::hypot(ox, oy);
}

Region polyline_band(std::span<const Point2> polyline, double half_width) {
  std::vector<Ring> rings;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Point2 d = polyline[i + 1] - polyline[i];
    const double len = d.norm();
    if (len <= 1e-9) continue;
    const Point2 n = Point2(-d.y(), d.x()) / len * half_width;
    rings.push_back({polyline[i] - n, polyline[i + 1] - n, polyline[i + 1] + n, polyline[i] + n});
  }
  // Round joins at interior vertices.
  constexpr int kJoinSides = 24;
  for (std::size_t i = 1; i + 1 < polyline.size(); ++i) {
    Ring disc;
    for (int k = 0; k < kJoinSides; ++k) {
      const double a = 2.0 * std::numbers::pi * k / kJoinSides;
      disc.emplace_back(polyline[i] + half_width * Point2(std::cos(a), std::sin(a)));
    }
    rings.push_back(std::move(disc));
  }
  return Region::from_rings(std::move(rings));
}

}  // namespace nods
