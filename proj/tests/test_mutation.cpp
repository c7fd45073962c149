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


#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "nods/errors.hpp"
#include "nods/mutation.hpp"
#include "nods/planner.hpp"
#include "oracles.hpp"

using namespace nods;

namespace {

struct Prepared {
  RoadMap map;
  Scenario seed;
  Observation obs;
};

Prepared prepare(const std::string& name) {
  Prepared p{{}, fixture::seed(name), {}};
  p.map = fixture::map_of(p.seed);
  const ReferencePlanner planner(p.map, PlannerParams::defaults());
  p.obs = simulate(p.seed, p.map, planner, SimConfig{}).observation;
  return p;
}

}  // namespace

TEST_CASE("added participants are disjoint from the ego in every window") {
  const MutationConfig cfg;
  std::size_t adds = 0;
  for (const char* name : {"S3_lane_follow", "S1_left_turn", "S5_crossing"}) {
    CAPTURE(name);
    const Prepared p = prepare(name);
    const MutationContext ctx(p.map, p.seed, p.obs);
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 34; ++trial) {
      const MutationOutcome out = mutate_add(ctx, p.seed, cfg, rng);
      if (out.aborted) continue;
      ++adds;
      const Scenario& s = out.scenario;
      REQUIRE(s.participants.size() == p.seed.participants.size() + 1);
      const std::size_t idx = s.participants.size() - 1;
      CHECK(s.participants[idx].is_added());
      CHECK(validate_scenario(s, &p.map).empty());
      CHECK(is_non_invasive(ctx, s, s.participants[idx].id, cfg.delta_t));
      CHECK(oracle::disjoint_per_window(s, idx, p.obs, cfg.delta_t));
      for (const auto& w : s.participants[idx].trajectory) CHECK(w.v <= cfg.npc_speed_max + 1e-9);
    }
  }
  CHECK(adds >= 90);
}

TEST_CASE("the window oracle flags a participant on the ego path") {
  const MutationConfig cfg;
  const Prepared p = prepare("S3_lane_follow");
  const MutationContext ctx(p.map, p.seed, p.obs);
  Scenario s = p.seed;
  Participant c = fixture::cone("in_the_way", p.obs.scenes[p.obs.scenes.size() / 2].ego.position);
  c.origin = ParticipantOrigin::Added;
  s.participants.push_back(c);
  CHECK_FALSE(oracle::disjoint_per_window(s, s.participants.size() - 1, p.obs, cfg.delta_t));
  CHECK_FALSE(is_non_invasive(ctx, s, "in_the_way", cfg.delta_t));
}

TEST_CASE("non-invasive mutations replay the seed path") {
  const MutationConfig cfg;
  const SimConfig sim;
  const Prepared p = prepare("S3_lane_follow");
  const MutationContext ctx(p.map, p.seed, p.obs);
  const DrivingPath path = ego_path(p.obs);
  std::mt19937_64 rng(23);
  Scenario current = p.seed;
  int ok = 0, total = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const MutationOutcome out = mutate(ctx, current, cfg, rng);
    ++total;
    ok += replay_validation(out.scenario, path, p.map, sim);
    current = out.scenario;
  }
  CHECK(ok >= 0.9 * total);
}

TEST_CASE("remove only ever drops added participants") {
  const MutationConfig cfg;
  const Prepared p = prepare("S5_crossing");
  const MutationContext ctx(p.map, p.seed, p.obs);
  std::mt19937_64 rng(29);

  const MutationOutcome nothing = mutate_remove(p.seed, rng);
  CHECK(nothing.aborted);
  CHECK(nothing.scenario == p.seed);

  Scenario s = p.seed;
  for (int k = 0; k < 3; ++k) {
    const MutationOutcome out = mutate_add(ctx, s, cfg, rng);
    if (!out.aborted) s = out.scenario;
  }
  std::set<std::string> seeded;
  for (const auto& q : p.seed.participants) seeded.insert(q.id);
  while (true) {
    const MutationOutcome out = mutate_remove(s, rng);
    if (out.aborted) break;
    REQUIRE(out.scenario.participants.size() + 1 == s.participants.size());
    std::set<std::string> left;
    for (const auto& q : out.scenario.participants) left.insert(q.id);
    for (const auto& id : seeded) CHECK(left.count(id));
    s = out.scenario;
  }
  CHECK(s == p.seed);
}

TEST_CASE("adding stops at the participant limit") {
  MutationConfig cfg;
  cfg.max_added = 2;
  const Prepared p = prepare("S3_lane_follow");
  const MutationContext ctx(p.map, p.seed, p.obs);
  std::mt19937_64 rng(31);
  Scenario s = p.seed;
  for (int k = 0; k < 20 && s.participants.size() < p.seed.participants.size() + 2; ++k) {
    const MutationOutcome out = mutate_add(ctx, s, cfg, rng);
    if (!out.aborted) s = out.scenario;
  }
  REQUIRE(s.participants.size() == p.seed.participants.size() + 2);
  CHECK_THROWS_AS(mutate_add(ctx, s, cfg, rng), Saturated);
  for (int k = 0; k < 10; ++k) {
    const MutationOutcome out = mutate(ctx, s, cfg, rng);
    std::size_t added = 0;
    for (const auto& q : out.scenario.participants) added += q.is_added();
    CHECK(added <= cfg.max_added);
  }
}

TEST_CASE("unconstrained mutation fails replay more often") {
  const MutationConfig cfg;
  const SimConfig sim;
  int guided_fail = 0, random_fail = 0;
  for (const char* name : {"S3_lane_follow", "S2_right_turn"}) {
    const Prepared p = prepare(name);
    const MutationContext ctx(p.map, p.seed, p.obs);
    const DrivingPath path = ego_path(p.obs);
    std::mt19937_64 rng_a(37), rng_b(37);
    for (int trial = 0; trial < 100; ++trial) {
      guided_fail += !replay_validation(mutate(ctx, p.seed, cfg, rng_a).scenario, path, p.map, sim);
      random_fail += !replay_validation(random_mutate(ctx, p.seed, cfg, rng_b).scenario, path, p.map, sim);
    }
  }
  CHECK(random_fail > guided_fail);
  CHECK(random_fail >= 20);
}

TEST_CASE("mutation is reproducible from the rng state") {
  const MutationConfig cfg;
  const Prepared p = prepare("S4_u_turn");
  const MutationContext ctx(p.map, p.seed, p.obs);
  std::mt19937_64 a(41), b(41);
  for (int k = 0; k < 10; ++k) CHECK(mutate(ctx, p.seed, cfg, a).scenario == mutate(ctx, p.seed, cfg, b).scenario);
}

TEST_CASE("mutation config validation") {
  MutationConfig cfg;
  cfg.delta_t = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  MutationConfig w;
  w.op_weights = {-1.0, 0.5, 0.5};
  CHECK_THROWS_AS(w.validate(), ConfigError);
}
