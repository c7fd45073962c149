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
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "nods/errors.hpp"

namespace nods {

// All geometry lives in one planar frame, meters and radians.
using Point2 = Eigen::Vector2d;

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

struct Pose {
  Point2 position = Point2::Zero();
  double heading = 0.0;

  Pose() = default;
  Pose(const Point2& p, double h) : position(p), heading(normalize_angle(h)) {}
  Pose(double x, double y, double h) : Pose(Point2(x, y), h) {}

  Point2 forward() const { return {std::cos(heading), std::sin(heading)}; }
};

struct Footprint {
  double length = 4.6;
  double width = 2.1;

  double circumradius() const { return 0.5 * std::hypot(length, width); }
};

/// Counter-clockwise, open ring (first vertex is not repeated).
using Ring = std::vector<Point2>;

/// Closed planar area stored as pairwise interior-disjoint simple polygons
/// without holes. Construction always normalizes: vertices are snapped to a
/// 1e-7 m grid, holes are split away, slivers below 1e-9 m^2 are dropped.
class Region {
 public:
  Region() = default;

  /// Builds the union of arbitrary (possibly overlapping, any orientation)
  /// simple rings.
  static Region from_rings(std::vector<Ring> rings);
  /// Trusts the caller: rings are already simple, CCW and disjoint.
  static Region from_normalized(std::vector<Ring> rings);

  const std::vector<Ring>& polygons() const { return polygons_; }
  bool empty() const { return polygons_.empty(); }
  double area() const;

  /// Axis-aligned bounds as (min, max); zero when empty.
  std::pair<Point2, Point2> bounds() const;

 private:
  std::vector<Ring> polygons_;
};

/// Signed shoelace area; positive for CCW.
double ring_area(const Ring& ring);

/// Corners of an oriented rectangle, CCW, grown by `inflation` on every side.
std::array<Point2, 4> footprint_corners(const Pose& pose, const Footprint& fp, double inflation = 0.0);

Region rectangle(const Pose& pose, const Footprint& fp, double inflation = 0.0);
Region convex_hull(std::span<const Point2> points);

/// Reachable sector over `dt` for a vehicle limited to `speed_max` and a
/// steering half-angle `steer_max`, approximated by a fan of `chords` chords.
Region sector_from_state(const Pose& pose, double speed_max, double steer_max, double dt, int chords = 48);

/// Area swept by `fp` along consecutive poses: union of the convex hulls of
/// each consecutive pair of (inflated) rectangles.
Region swept_region(std::span<const Pose> path_segment, const Footprint& fp, double inflation = 0.0);
/// The convex pieces whose union is swept_region(): one hull per pair of
/// consecutive poses, or the single rectangle for one pose.
std::vector<Ring> swept_hulls(std::span<const Pose> path_segment, const Footprint& fp, double inflation = 0.0);

/// Convex hull, CCW, collinear points removed.
Ring convex_hull_ring(std::vector<Point2> points);
// Queries on convex CCW rings.
bool convex_contains(const Ring& hull, const Point2& p);
bool convex_overlap(const Ring& a, const Ring& b);
/// 0 when the hulls overlap or touch.
double convex_distance(const Ring& a, const Ring& b);

Region region_union(const Region& a, const Region& b);
Region region_union(std::span<const Region> regions);
Region region_difference(const Region& a, const Region& b);
Region region_intersection(const Region& a, const Region& b);
/// Intersection of all inputs; the empty list yields an empty region.
Region region_intersection(std::span<const Region> regions);

/// True when the interiors share more than `area_tol` square meters.
bool regions_overlap(const Region& a, const Region& b, double area_tol = 1e-9);

/// Even-odd point-in-region test.
bool contains(const Region& region, const Point2& p);

/// Area-uniform sample strictly inside the region.
/// Throws EmptyRegion when the region has no area.
Point2 sample_point(const Region& region, std::mt19937_64& rng);

/// sample_point() with the triangulation cached for repeated draws.
class RegionSampler {
 public:
  explicit RegionSampler(const Region& region);
  double area() const;
  const Region& region() const { return region_; }
  /// Throws EmptyRegion when the region has no area.
  Point2 sample(std::mt19937_64& rng) const;

 private:
  Region region_;
  std::vector<std::array<Point2, 3>> tris_;
  std::vector<double> cumulative_;
};

/// Ear-clipping triangulation of one simple CCW ring.
std::vector<std::array<Point2, 3>> triangulate(const Ring& ring);

// Oriented rectangles, used by collision checking and clearance queries.
bool rectangles_overlap(const std::array<Point2, 4>& a, const std::array<Point2, 4>& b);
/// Minimum distance between two convex quads; 0 when they overlap.
double rectangle_distance(const std::array<Point2, 4>& a, const std::array<Point2, 4>& b);
/// Distance from a point to a filled oriented rectangle; 0 inside.
double point_rectangle_distance(const Point2& p, const Pose& pose, const Footprint& fp);

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b);

/// Polygonal band of half-width `half_width` around a polyline, with round
/// joins and flat ends.
Region polyline_band(std::span<const Point2> polyline, double half_width);

}  // namespace nods
