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


#include "nods/feedback.hpp"

#include <limits>
#include <numbers>
#include <numeric>

namespace nods {

FeatureScaling FeatureScaling::fit(const BehaviorSeries& reference) {
  FeatureScaling s;
  if (reference.rows() == 0) return s;
  s.mean = reference.colwise().mean();
  const BehaviorSeries centered = reference.rowwise() - s.mean;
  s.stddev = (centered.array().square().colwise().sum() / static_cast<double>(reference.rows())).sqrt().matrix();
  s.stddev = s.stddev.cwiseMax(1e-6);
  return s;
}

BehaviorSeries FeatureScaling::apply(const BehaviorSeries& raw) const {
  return ((raw.rowwise() - mean).array().rowwise() / stddev.array()).matrix();
}

BehaviorSeries behavior_series(const Observation& obs) {
  BehaviorSeries x(static_cast<Eigen::Index>(obs.scenes.size()), 3);
  double prev = 0.0;
  for (std::size_t i = 0; i < obs.scenes.size(); ++i) {
    const Waypoint& w = obs.scenes[i].ego;
    double h = w.heading;
    if (i > 0) h = prev + normalize_angle(w.heading - prev);
    prev = h;
    x.row(static_cast<Eigen::Index>(i)) << h, w.v, w.a;
  }
  return x;
}

BehaviorSeries behavior_series(const Observation& obs, const FeatureScaling& scaling) {
  return scaling.apply(behavior_series(obs));
}

double path_feedback(const DrivingPath& tau_star, const DrivingPath& tau_prime) {
  if (tau_star.points.empty() || tau_prime.points.empty()) throw InvariantError("path_feedback of an empty path");
  double sum = 0.0;
  for (const auto& p : tau_prime.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : tau_star.points) best = std::min(best, (p - q).squaredNorm());
    sum += std::sqrt(best);
  }
  return sum / static_cast<double>(tau_prime.points.size());
}

Fitness fitness(const Observation& seed_obs, const Observation& cand_obs, const FeatureScaling& scaling,
                const KernelSpec& k) {
  const double f_p = path_feedback(ego_path(seed_obs), ego_path(cand_obs));
  const double f_b = mmd(behavior_series(seed_obs, scaling), behavior_series(cand_obs, scaling), k);
  return Fitness::of(f_p, f_b);
}

Fitness fitness(const Observation& seed_obs, const Observation& cand_obs, const KernelSpec& k) {
  return fitness(seed_obs, cand_obs, FeatureScaling::fit(behavior_series(seed_obs)), k);
}

std::vector<std::size_t> top_n_indices(std::span<const double> totals, std::size_t n) {
  std::vector<std::size_t> idx(totals.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return totals[a] > totals[b]; });
  if (idx.size() > n) idx.resize(n);
  return idx;
}

}  // namespace nods
