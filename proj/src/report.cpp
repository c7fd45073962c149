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


#include "nods/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace nods {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::abs(v) < 5e-4 ? 0.0 : v);
  return buf;
}

std::string points_attr(const std::vector<Point2>& pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += num(pts[i].x()) + "," + num(pts[i].y());
  }
  return out;
}

std::string polygon(const std::array<Point2, 4>& c, const std::string& cls, const std::string& style) {
  return "<polygon class=\"" + cls + "\" points=\"" + points_attr({c.begin(), c.end()}) + "\" " + style + "/>\n";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const RoadMap& map, const Scenario& s, const std::vector<PathLayer>& paths,
                       const RenderOptions& opt) {
  auto [lo, hi] = map.bounds();
  lo -= Point2(2.0, 2.0);
  hi += Point2(2.0, 2.0);
  const Point2 size = hi - lo;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(size.x() * opt.pixels_per_meter) << "\" height=\""
      << num(size.y() * opt.pixels_per_meter) << "\" viewBox=\"0 0 " << num(size.x()) << " " << num(size.y())
      << "\">\n";
  // World y points up; flip once for the whole drawing.
  svg << "<g transform=\"translate(" << num(-lo.x()) << "," << num(hi.y()) << ") scale(1,-1)\">\n";
  svg << "<rect x=\"" << num(lo.x()) << "\" y=\"" << num(lo.y()) << "\" width=\"" << num(size.x()) << "\" height=\""
      << num(size.y()) << "\" fill=\"#f4f1e8\"/>\n";

  for (const auto& lane : map.lanes) {
    svg << "<polyline class=\"lane\" id=\"lane-" << escape(lane.id) << "\" points=\"" << points_attr(lane.centerline)
        << "\" fill=\"none\" stroke=\"#b8b8b8\" stroke-width=\"" << num(lane.width)
        << "\" stroke-linejoin=\"round\"/>\n";
  }
  for (const auto& lane : map.lanes) {
    svg << "<polyline class=\"lane-center\" points=\"" << points_attr(lane.centerline)
        << "\" fill=\"none\" stroke=\"#ffffff\" stroke-width=\"0.12\" stroke-dasharray=\"1,1\"/>\n";
  }

  if (opt.grid) {
    const double c = opt.grid_spec.cell_size;
    const double x0 = opt.grid_spec.origin.x() + std::floor((lo.x() - opt.grid_spec.origin.x()) / c) * c;
    const double y0 = opt.grid_spec.origin.y() + std::floor((lo.y() - opt.grid_spec.origin.y()) / c) * c;
    for (double x = x0; x <= hi.x(); x += c)
      svg << "<line class=\"grid\" x1=\"" << num(x) << "\" y1=\"" << num(lo.y()) << "\" x2=\"" << num(x) << "\" y2=\""
          << num(hi.y()) << "\" stroke=\"#dddddd\" stroke-width=\"0.04\"/>\n";
    for (double y = y0; y <= hi.y(); y += c)
      svg << "<line class=\"grid\" x1=\"" << num(lo.x()) << "\" y1=\"" << num(y) << "\" x2=\"" << num(hi.x())
          << "\" y2=\"" << num(y) << "\" stroke=\"#dddddd\" stroke-width=\"0.04\"/>\n";
  }

  for (const auto& layer : paths) {
    if (!layer.show_cells || layer.path.points.empty()) continue;
    const GridSpec& g = opt.grid_spec;
    for (const auto& [i, j] : covered_grids(layer.path, g).cells) {
      svg << "<rect class=\"cell\" x=\"" << num(g.origin.x() + static_cast<double>(i) * g.cell_size) << "\" y=\""
          << num(g.origin.y() + static_cast<double>(j) * g.cell_size) << "\" width=\"" << num(g.cell_size)
          << "\" height=\"" << num(g.cell_size) << "\" fill=\"" << layer.color << "\" fill-opacity=\"0.18\"/>\n";
    }
  }

  svg << "<circle class=\"task\" cx=\"" << num(s.task.destination.x()) << "\" cy=\"" << num(s.task.destination.y())
      << "\" r=\"" << num(s.task.goal_radius) << "\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"0.15\"/>\n";
  svg << polygon(footprint_corners(s.task.start, Footprint{}), "task",
                 "fill=\"#2ca02c\" fill-opacity=\"0.35\" stroke=\"#2ca02c\" stroke-width=\"0.1\"");

  for (const auto& p : s.participants) {
    if (p.trajectory.empty()) continue;
    const std::string fill = p.is_static() ? "#ff7f0e" : "#9467bd";
    const std::string stroke = p.is_added() ? "#d62728" : "#333333";
    if (!p.is_static() && p.trajectory.size() > 1) {
      std::vector<Point2> pts;
      for (const auto& w : p.trajectory) pts.push_back(w.position);
      svg << "<polyline class=\"participant-trajectory\" points=\"" << points_attr(pts) << "\" fill=\"none\" stroke=\""
          << fill << "\" stroke-width=\"0.15\" stroke-dasharray=\"0.6,0.4\"/>\n";
    }
    svg << polygon(footprint_corners(p.trajectory.front().pose(), p.footprint), "participant",
                   "id=\"" + escape(p.id) + "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\" stroke-width=\"0.1\"");
  }

  for (const auto& layer : paths) {
    if (layer.path.points.empty()) continue;
    svg << "<polyline class=\"path\" data-label=\"" << escape(layer.label) << "\" points=\""
        << points_attr(layer.path.points) << "\" fill=\"none\" stroke=\"" << layer.color << "\" stroke-width=\"0.25\""
        << (layer.dashed ? " stroke-dasharray=\"0.8,0.5\"" : "") << "/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out << "strategy,seed_id,rng_seed,nods_count,mutation_valid_pct,wall_s\n";
  for (const auto& r : rows) {
    out << r.strategy << ',' << r.seed_id << ',' << r.rng_seed << ',' << r.nods_count << ','
        << num(r.mutation_valid_pct) << ',' << num(r.wall_s) << '\n';
  }
  return out.str();
}

}  // namespace nods
