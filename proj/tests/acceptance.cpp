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


// Acceptance harness. Prints one PASS/FAIL line per criterion; arguments
// select criteria (default: all). Exit code is non-zero if any selected
// criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "nods/engine.hpp"
#include "nods/feedback.hpp"
#include "nods/geometry.hpp"
#include "nods/mutation.hpp"
#include "nods/oracle.hpp"
#include "nods/planner.hpp"
#include "nods/simulator.hpp"
#include "nods/stats.hpp"
#include "oracles.hpp"

using namespace nods;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Non-invasive area against a 0.05 m raster.
Verdict geometry_raster() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> pos(-4.0, 4.0), ang(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> vmax(2.0, 8.0), steer(0.2, 1.2), dt(0.5, 1.5), len(0.6, 4.6);
  double worst = 1.0, sum = 0.0;
  const int configs = 500;
  for (int i = 0; i < configs; ++i) {
    MutationConfig cfg;
    cfg.npc_speed_max = vmax(rng);
    cfg.npc_steer_max = steer(rng);
    cfg.delta_t = dt(rng);
    const Pose y_t(pos(rng), pos(rng), ang(rng));
    const Footprint ego_fp{len(rng), len(rng)};
    std::vector<Pose> ego;
    Pose p(pos(rng), pos(rng), ang(rng));
    for (int k = 0, n = 1 + static_cast<int>(rng() % 8); k < n; ++k) {
      ego.push_back(p);
      p = Pose(p.position + 0.8 * p.forward(), p.heading + 0.15 * (ang(rng) / std::numbers::pi));
    }
    std::vector<Participant> parts;
    for (int k = 0, n = static_cast<int>(rng() % 3); k < n; ++k)
      parts.push_back(fixture::cone("o" + std::to_string(k), Point2(2.0 * pos(rng), 2.0 * pos(rng)),
                                    Footprint{len(rng), len(rng)}));
    const Region area = non_invasive_area(y_t, ego, parts, 0.0, cfg, ego_fp);

    const double r = cfg.npc_speed_max * cfg.delta_t;
    const auto ego_pieces = oracle::swept_pieces(ego, ego_fp);
    auto truth = [&](const Point2& q) {
      if (!oracle::in_sector(q, y_t, r, cfg.npc_steer_max)) return false;
      if (oracle::in_pieces(ego_pieces, q)) return false;
      for (const auto& o : parts)
        if (oracle::in_rect(q, o.trajectory.front().pose(), o.footprint)) return false;
      return true;
    };
    const Point2 lo = y_t.position - Point2(r, r), hi = y_t.position + Point2(r, r);
    const double agree = oracle::raster_agreement(lo, hi, [&](const Point2& q) { return contains(area, q); }, truth);
    worst = std::min(worst, agree);
    sum += agree;
  }
  const double secs = seconds_since(t0);
  return {worst >= 0.99 && secs < 30.0,
          fmt("%d configs, worst agreement %.5f, mean %.5f, %.1f s", configs, worst, sum / configs, secs)};
}

// 2. Disjointness and replay over non-invasive mutations on all seeds.
Verdict mutation_corpus() {
  const auto t0 = Clock::now();
  const MutationConfig cfg;
  const SimConfig sim;
  const int target = 200;
  int produced = 0, disjoint = 0, replay_ok = 0, checked_added = 0;
  std::size_t seed_index = 0;
  for (const char* name : fixture::kSeeds) {
    const int quota = (target - produced) / static_cast<int>(std::size(fixture::kSeeds) - seed_index++);
    const Scenario seed = fixture::seed(name);
    const RoadMap map = fixture::map_of(seed);
    const ReferencePlanner planner(map, PlannerParams::defaults());
    const Observation obs = simulate(seed, map, planner, sim).observation;
    const DrivingPath path = ego_path(obs);
    const MutationContext ctx(map, seed, obs, sim.ego.footprint);
    std::mt19937_64 rng(std::hash<std::string>{}(name) ^ 0x5eed);
    Scenario current = seed;
    for (int got = 0, tries = 0; got < quota && tries < 50 * quota; ++tries) {
      const MutationOutcome out = mutate(ctx, current, cfg, rng);
      if (out.aborted) {
        current = seed;
        continue;
      }
      ++got;
      ++produced;
      bool ok = true;
      for (std::size_t k = 0; k < out.scenario.participants.size(); ++k) {
        if (!out.scenario.participants[k].is_added()) continue;
        ++checked_added;
        ok = ok && oracle::disjoint_per_window(out.scenario, k, obs, cfg.delta_t, sim.ego.footprint);
      }
      disjoint += ok;
      replay_ok += replay_validation(out.scenario, path, map, sim);
      current = got % 5 == 0 ? seed : out.scenario;
    }
  }
  const double secs = seconds_since(t0);
  const double replay_rate = produced ? static_cast<double>(replay_ok) / produced : 0.0;
  return {produced == target && disjoint == produced && replay_rate >= 0.90 && secs < 300.0,
          fmt("%d mutations (%d added participants checked), disjoint %d/%d, replay %.1f%%, %.1f s", produced,
              checked_added, disjoint, produced, 100.0 * replay_rate, secs)};
}

// 3 and 4. Strategy comparison on S3 with the timid planner.
std::map<Strategy, std::vector<double>> search_counts(double& secs) {
  const auto t0 = Clock::now();
  const Scenario seed = fixture::seed("S3_lane_follow");
  const RoadMap map = fixture::map_of(seed);
  const ReferencePlanner planner(map, PlannerParams::timid());
  std::map<Strategy, std::vector<double>> counts;
  for (Strategy s : all_strategies()) {
    for (std::uint64_t r = 0; r < 10; ++r) {
      EngineConfig cfg;
      cfg.strategy = s;
      cfg.iterations = 150;
      cfg.rng_seed = r;
      counts[s].push_back(static_cast<double>(run_campaign(seed, map, planner, cfg).nods.size()));
    }
    std::printf("  %-12s mean #NoDS %6.1f :", to_string(s), mean(counts[s]));
    for (double c : counts[s]) std::printf(" %g", c);
    std::printf("\n");
    std::fflush(stdout);
  }
  secs = seconds_since(t0);
  return counts;
}

Verdict baseline_ordering(const std::map<Strategy, std::vector<double>>& c, double secs) {
  const auto& d = c.at(Strategy::Decictor);
  const auto& rd = c.at(Strategy::RandomDelta);
  const auto& r = c.at(Strategy::Random);
  const double p1 = mann_whitney_greater(d, rd).p_value;
  const double p2 = mann_whitney_greater(rd, r).p_value;
  const bool pass = mean(d) > mean(rd) && mean(rd) > mean(r) && p1 < 0.05 && p2 < 0.05 && secs < 1800.0;
  return {pass, fmt("Decictor %.1f, Random-delta %.1f, Random %.1f; p(D>Rd)=%.4f, p(Rd>R)=%.4f; %.0f s total", mean(d),
                    mean(rd), mean(r), p1, p2, secs)};
}

Verdict ablation_ordering(const std::map<Strategy, std::vector<double>>& c, double secs) {
  const double d = mean(c.at(Strategy::Decictor));
  bool pass = secs < 3600.0;
  std::string detail = fmt("Decictor %.1f vs", d);
  for (Strategy s : {Strategy::FRandom, Strategy::FCon, Strategy::FPath, Strategy::FBehavior, Strategy::WithoutCons,
                     Strategy::WithoutMot, Strategy::WithoutRem}) {
    const double m = mean(c.at(s));
    pass = pass && d > m;
    detail += fmt(" %s %.1f%s", to_string(s), m, d > m ? "" : "(!)");
  }
  return {pass, detail};
}

// 5. Metric axioms as property tests.
Verdict metric_axioms() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> cell(0, 6), size(1, 14), rows(2, 10);
  std::uniform_real_distribution<double> u(-20.0, 20.0), eps(0.0, 0.999);
  std::normal_distribution<double> g(0.0, 1.0);
  std::map<std::string, int> failures;
  const int cases = 1000;
  auto fail = [&](const char* what, bool bad) {
    if (bad) ++failures[what];
  };
  auto random_set = [&] {
    std::vector<GridCell> c;
    for (int k = size(rng); k > 0; --k) c.push_back({cell(rng), cell(rng)});
    return GridCellSet::from_cells(c);
  };
  auto random_path = [&](int n) {
    DrivingPath p;
    for (int k = 0; k < n; ++k) p.points.emplace_back(u(rng), u(rng));
    return p;
  };
  auto random_series = [&] {
    BehaviorSeries x(rows(rng), 3);
    for (Eigen::Index i = 0; i < x.rows(); ++i) x.row(i) << g(rng), 3.0 * g(rng), 0.5 * g(rng);
    return x;
  };
  auto as_rows = [](const BehaviorSeries& m) {
    oracle::Rows out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back({m(i, 0), m(i, 1), m(i, 2)});
    return out;
  };
  auto as_set = [](const GridCellSet& s) {
    std::set<oracle::Cell> out;
    for (const auto& [i, j] : s.cells) out.insert({i, j});
    return out;
  };

  for (int i = 0; i < cases; ++i) {
    // Jaccard.
    const GridCellSet a = random_set(), b = random_set();
    const double s = grid_similarity(a, b);
    fail("jaccard symmetry", s != grid_similarity(b, a));
    fail("jaccard bounds", s < 0.0 || s > 1.0);
    fail("jaccard identity", (s == 1.0) != (a == b) || grid_similarity(a, a) != 1.0);
    fail("jaccard oracle", std::abs(s - oracle::jaccard(as_set(a), as_set(b))) > 1e-15);

    // Grid translation and self-consistency.
    std::uniform_int_distribution<int> q(-200, 200);
    DrivingPath tau;
    for (int k = 0; k < 5; ++k) tau.points.emplace_back(q(rng) * 0.125 + 0.0625, q(rng) * 0.125 + 0.0625);
    const Point2 shift(q(rng) * 0.125, q(rng) * 0.125);
    DrivingPath moved = tau;
    for (auto& p : moved.points) p += shift;
    const GridSpec ga{2.0, Point2(0.25, -0.5)}, gb{2.0, ga.origin + shift};
    fail("grid translation", !(covered_grids(tau, ga) == covered_grids(moved, gb)));
    fail("self consistency", !consistency_check(tau, tau, ga, eps(rng)).consistent);

    // Path feedback.
    const DrivingPath star = random_path(1 + static_cast<int>(rng() % 8));
    const DrivingPath prime = random_path(1 + static_cast<int>(rng() % 8));
    const double fp = path_feedback(star, prime);
    fail("f_p non-negative", fp < 0.0);
    fail("f_p identity", path_feedback(star, star) != 0.0);
    fail("f_p oracle", std::abs(fp - oracle::mean_nearest(star.points, prime.points)) > 1e-12);
    DrivingPath grown = prime;
    grown.points.push_back(star.points[rng() % star.points.size()]);
    fail("f_p seed point adds zero", std::abs(path_feedback(star, grown) * grown.points.size() -
                                              fp * prime.points.size()) > 1e-9);

    // MMD.
    const BehaviorSeries x = random_series(), y = random_series();
    const double m = mmd(x, y);
    fail("mmd non-negative", m < -1e-12);
    fail("mmd zero on identical", mmd(x, x) > 1e-12);
    fail("mmd symmetry", std::abs(m - mmd(y, x)) > 1e-12);
    const double sigma = oracle::median_pairwise(as_rows(x), as_rows(y));
    fail("mmd double-sum oracle", std::abs(m - oracle::mmd_double_sum(as_rows(x), as_rows(y), sigma)) > 1e-12);

    // Selection.
    std::vector<double> totals;
    for (int k = 0, n = 1 + static_cast<int>(rng() % 9); k < n; ++k) totals.push_back(static_cast<double>(rng() % 4));
    const std::size_t n = 1 + rng() % 6;
    const auto top = top_n_indices(totals, n);
    bool ok = top.size() == std::min(n, totals.size());
    for (std::size_t k = 1; k < top.size(); ++k)
      ok = ok && (totals[top[k]] < totals[top[k - 1]] || (totals[top[k]] == totals[top[k - 1]] && top[k] > top[k - 1]));
    fail("top-n order and size", !ok);
  }

  // Hand-computed cases.
  const DrivingPath origin{{Point2(0, 0)}};
  fail("f_p hand cases", path_feedback(origin, DrivingPath{{Point2(0, 1)}}) != 1.0 ||
                             path_feedback(origin, DrivingPath{{Point2(0, 1), Point2(0, 3)}}) != 2.0);

  const double secs = seconds_since(t0);
  std::string detail = fmt("%d cases per property, %.1f s", cases, secs);
  for (const auto& [what, n] : failures) detail += fmt("; %s failed %d", what.c_str(), n);
  return {failures.empty() && secs < 60.0, detail};
}

// 6. Byte-identical result.json.
Verdict determinism() {
  namespace fs = std::filesystem;
  const auto t0 = Clock::now();
  const Scenario seed = fixture::seed("S3_lane_follow");
  const RoadMap map = fixture::map_of(seed);
  const ReferencePlanner planner(map, PlannerParams::timid());
  EngineConfig cfg;
  cfg.iterations = 150;
  cfg.rng_seed = 2;
  const fs::path root = fs::temp_directory_path() / fmt("nods_acceptance_%lld",
                                                        static_cast<long long>(Clock::now().time_since_epoch().count()));
  std::string docs[2];
  std::size_t found = 0;
  for (int k = 0; k < 2; ++k) {
    const CampaignResult r = run_campaign(seed, map, planner, cfg);
    found = r.nods.size();
    const fs::path dir = root / std::to_string(k);
    write_campaign(r, dir.string());
    docs[k] = read_file((dir / "result.json").string());
  }
  fs::remove_all(root);
  const double secs = seconds_since(t0);
  return {docs[0] == docs[1] && !docs[0].empty() && secs < 300.0,
          fmt("two 150-iteration campaigns, %zu NoDS each, %zu bytes, %s, %.1f s", found, docs[0].size(),
              docs[0] == docs[1] ? "identical" : "DIFFERENT", secs)};
}

// 7. Similarity exactly at the threshold.
Verdict boundary() {
  const auto a = GridCellSet::from_cells({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  const auto b = GridCellSet::from_cells({{0, 0}, {1, 0}, {2, 0}, {2, 1}});
  const double s = grid_similarity(a, b);
  const GridSpec g{2.0, Point2::Zero()};
  const auto v = consistency_check(DrivingPath{{Point2(1, 1), Point2(7, 1)}},
                                   DrivingPath{{Point2(1, 1), Point2(5, 1), Point2(5, 3)}}, g, 0.6);
  const bool pass = s == 0.6 && v.similarity == 0.6 && !v.consistent &&
                    is_nods(TaskOutcome{TaskStatus::Completed, 1.0, std::nullopt}, v);
  return {pass, fmt("|and|=3 |or|=5 similarity %.17g, consistent=%s", v.similarity, v.consistent ? "true" : "false")};
}

// 8. Kinematics against closed forms.
Verdict kinematics() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> steer(-0.6, 0.6), speed(0.0, 12.0), head(-3.1, 3.1);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const double v = speed(rng), h0 = head(rng);
    const double d = trial < 10 ? 0.0 : steer(rng);
    Waypoint s{0.0, Point2(-7, 2), h0, v, 0.0};
    for (int k = 0; k < 1000; ++k) s = step_ego(s, 0.0, d, 0.1, 2.8);
    const auto cf = oracle::bicycle_after(-7, 2, h0, v, d, 0.1, 2.8, 1000);
    worst = std::max({worst, std::abs(s.position.x() - cf.x), std::abs(s.position.y() - cf.y),
                      std::abs(oracle::wrap(s.heading - cf.heading)), std::abs(s.v - v)});
  }
  return {worst <= 1e-9, fmt("40 runs of 1000 steps (10 straight), worst error %.3g", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8};

  bool all = true;
  auto report = [&](int n, const Verdict& v) {
    std::printf("criterion %d: %s %s\n", n, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    all = all && v.pass;
  };
  try {
    if (wanted.count(1)) report(1, geometry_raster());
    if (wanted.count(2)) report(2, mutation_corpus());
    if (wanted.count(3) || wanted.count(4)) {
      double secs = 0.0;
      const auto counts = search_counts(secs);
      if (wanted.count(3)) report(3, baseline_ordering(counts, secs));
      if (wanted.count(4)) report(4, ablation_ordering(counts, secs));
    }
    if (wanted.count(5)) report(5, metric_axioms());
    if (wanted.count(6)) report(6, determinism());
    if (wanted.count(7)) report(7, boundary());
    if (wanted.count(8)) report(8, kinematics());
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  return all ? 0 : 1;
}
