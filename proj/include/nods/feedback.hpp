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

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "nods/scenario.hpp"

namespace nods {

/// One row per observation frame: (heading, v, a).
template <typename Scalar>
using BehaviorMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;
using BehaviorSeries = BehaviorMatrix<double>;

/// Per-dimension affine standardization fitted on a reference series.
struct FeatureScaling {
  Eigen::RowVector3d mean = Eigen::RowVector3d::Zero();
  Eigen::RowVector3d stddev = Eigen::RowVector3d::Ones();

  /// Population mean and standard deviation; stddev clamped at 1e-6.
  static FeatureScaling fit(const BehaviorSeries& reference);
  BehaviorSeries apply(const BehaviorSeries& raw) const;
};

/// Raw ego behavior, one row per scene. Heading is unwrapped along the
/// series so a turn through +-pi stays continuous.
BehaviorSeries behavior_series(const Observation& obs);
/// Standardized with the given scaling (normally fitted on the seed).
BehaviorSeries behavior_series(const Observation& obs, const FeatureScaling& scaling);

struct KernelSpec {
  enum class Kind { Rbf };
  Kind kind = Kind::Rbf;
  /// Fixed RBF bandwidth; nullopt selects the median heuristic.
  std::optional<double> bandwidth;
};

/// Median of all pairwise Euclidean distances among the rows of x and y
/// together; 1.0 when that median is zero.
template <typename DX, typename DY>
typename DX::Scalar median_bandwidth(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  using Scalar = typename DX::Scalar;
  const Eigen::Index n = x.rows();
  const Eigen::Index m = y.rows();
  std::vector<Scalar> d;
  d.reserve(static_cast<std::size_t>((n + m) * (n + m - 1) / 2));
  auto row = [&](Eigen::Index i) -> Eigen::Matrix<Scalar, 1, Eigen::Dynamic> {
    return i < n ? Eigen::Matrix<Scalar, 1, Eigen::Dynamic>(x.row(i)) : Eigen::Matrix<Scalar, 1, Eigen::Dynamic>(y.row(i - n));
  };
  std::vector<Eigen::Matrix<Scalar, 1, Eigen::Dynamic>> rows;
  rows.reserve(static_cast<std::size_t>(n + m));
  for (Eigen::Index i = 0; i < n + m; ++i) rows.push_back(row(i));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) d.push_back((rows[i] - rows[j]).norm());
  }
  if (d.empty()) return Scalar(1);
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
  Scalar med = d[mid];
  if (d.size() % 2 == 0) {
    const Scalar lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
    med = (med + lower) / Scalar(2);
  }
  return med > Scalar(0) ? med : Scalar(1);
}

/// Mean of k(a_i, b_j) over all row pairs for the RBF kernel.
template <typename DA, typename DB>
typename DA::Scalar rbf_mean(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b, typename DA::Scalar sigma) {
  using Scalar = typename DA::Scalar;
  const Scalar inv = Scalar(-1) / (Scalar(2) * sigma * sigma);
  Scalar sum(0);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) sum += std::exp((a.row(i) - b.row(j)).squaredNorm() * inv);
  }
  return sum / static_cast<Scalar>(a.rows() * b.rows());
}

/// Square root of the biased (V-statistic) MMD^2 estimate.
template <typename DX, typename DY>
typename DX::Scalar mmd(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y, const KernelSpec& k = {}) {
  using Scalar = typename DX::Scalar;
  if (x.rows() == 0 || y.rows() == 0) throw InvariantError("mmd of an empty series");
  Scalar sigma;
  if (k.bandwidth) {
    if (!(*k.bandwidth > 0.0)) throw ConfigError("kernel bandwidth must be > 0");
    sigma = static_cast<Scalar>(*k.bandwidth);
  } else {
    sigma = median_bandwidth(x, y);
  }
  const Scalar m2 = rbf_mean(x, x, sigma) + rbf_mean(y, y, sigma) - Scalar(2) * rbf_mean(x, y, sigma);
  return std::sqrt(std::max(m2, Scalar(0)));
}

/// Mean over tau_prime of the distance to the nearest point of tau_star.
double path_feedback(const DrivingPath& tau_star, const DrivingPath& tau_prime);

struct Fitness {
  double f_p = 0.0;
  double f_b = 0.0;
  double total = 0.0;

  static Fitness of(double f_p, double f_b) { return Fitness{f_p, f_b, f_p + f_b}; }
};

/// f_p from the ego paths, f_b from the standardized behavior series.
Fitness fitness(const Observation& seed_obs, const Observation& cand_obs, const KernelSpec& k = {});
/// Same, reusing a scaling fitted on the seed observation.
Fitness fitness(const Observation& seed_obs, const Observation& cand_obs, const FeatureScaling& scaling,
                const KernelSpec& k = {});

/// Indices of the n largest totals, descending; ties keep input order.
std::vector<std::size_t> top_n_indices(std::span<const double> totals, std::size_t n);

template <typename T>
std::vector<T> select_top_n(const std::vector<std::pair<T, Fitness>>& candidates, std::size_t n) {
  std::vector<double> totals;
  totals.reserve(candidates.size());
  for (const auto& c : candidates) totals.push_back(c.second.total);
  std::vector<T> out;
  for (std::size_t i : top_n_indices(totals, n)) out.push_back(candidates[i].first);
  return out;
}

}  // namespace nods
