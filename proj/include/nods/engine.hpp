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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nods/feedback.hpp"
#include "nods/mutation.hpp"
#include "nods/oracle.hpp"
#include "nods/simulator.hpp"

namespace nods {

enum class Strategy {
  Decictor,
  Random,
  RandomDelta,
  WithoutCons,
  WithoutMot,
  WithoutRem,
  FRandom,
  FCon,
  FPath,
  FBehavior,
};

const char* to_string(Strategy s);
/// Case-insensitive; throws UnknownStrategy.
Strategy parse_strategy(std::string_view name);
const std::vector<Strategy>& all_strategies();

struct EngineConfig {
  std::size_t population_n = 4;
  std::size_t iterations = 150;
  /// Wall-clock budget; when set it replaces the iteration budget and the
  /// run is no longer reproducible.
  std::optional<double> budget_seconds;
  Strategy strategy = Strategy::Decictor;
  double epsilon = 0.6;
  double grid_size = 2.0;
  MutationConfig mutation;
  SimConfig sim;
  KernelSpec kernel;
  std::uint64_t rng_seed = 0;
  std::size_t jobs = 1;
  bool probabilistic_selection = false;

  /// Throws ConfigError.
  void validate() const;
};

enum class MutationMode { NonInvasive, Unconstrained };
enum class FeedbackMode { Full, PathOnly, BehaviorOnly, Consistency, None };
enum class SelectionMode { TopN, Uniform };

/// The pipeline a strategy name stands for.
struct StrategyPlan {
  MutationMode mutation = MutationMode::NonInvasive;
  FeedbackMode feedback = FeedbackMode::Full;
  SelectionMode selection = SelectionMode::TopN;
  MutationConfig mutation_cfg;
};

StrategyPlan strategy_dispatch(const EngineConfig& cfg);

struct NoDSRecord {
  Scenario scenario;
  Observation observation;
  TaskOutcome outcome;
  ConsistencyVerdict verdict;
  std::size_t iteration = 0;
  Fitness fitness;
};

struct IterationLog {
  std::size_t iteration = 0;
  std::vector<double> population_fitness;
  std::size_t offspring = 0;
  std::size_t completed = 0;
  std::size_t nods_found = 0;
};

struct CampaignResult {
  std::string strategy;
  std::string seed_id;
  std::uint64_t rng_seed = 0;
  Observation seed_observation;
  std::vector<NoDSRecord> nods;
  std::size_t iterations_run = 0;
  std::size_t mutation_attempts = 0;
  std::size_t mutation_valid = 0;
  std::vector<IterationLog> log;
  std::vector<Scenario> final_population;

  double mutation_valid_pct() const;
  /// NoDSs with distinct participant sets.
  std::size_t unique_nods() const;
};

/// Order-independent, id-independent key of a scenario's participants.
std::string participant_set_key(const Scenario& s);

/// Throws SeedRejected when the seed does not complete or is invalid.
CampaignResult run_campaign(const Scenario& seed, const RoadMap& map, const PlannerInterface& planner,
                            const EngineConfig& cfg);

/// Deterministic summary document (no timings).
std::string campaign_json(const CampaignResult& result);
/// Writes result.json plus one scenario and observation file per NoDS.
void write_campaign(const CampaignResult& result, const std::string& out_dir);

struct ComparisonRow {
  std::string strategy;
  std::string seed_id;
  std::uint64_t rng_seed = 0;
  std::size_t nods_count = 0;
  double mutation_valid_pct = 0.0;
  double wall_s = 0.0;
};

/// One campaign per (strategy, repeat), rng seeds base_rng_seed + repeat.
std::vector<ComparisonRow> compare_strategies(const Scenario& seed, const RoadMap& map,
                                              const PlannerInterface& planner, const std::vector<Strategy>& strategies,
                                              std::size_t repeats, const EngineConfig& base);

}  // namespace nods
