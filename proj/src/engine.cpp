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


#include "nods/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cctype>
#include <filesystem>
#include <numeric>
#include <set>
#include <thread>

#include "json.hpp"

namespace nods {

using json = nlohmann::json;

namespace {

struct StrategyName {
  Strategy strategy;
  const char* name;
};

constexpr StrategyName kNames[] = {
    {Strategy::Decictor, "Decictor"},     {Strategy::Random, "Random"},         {Strategy::RandomDelta, "RandomDelta"},
    {Strategy::WithoutCons, "WithoutCons"}, {Strategy::WithoutMot, "WithoutMot"}, {Strategy::WithoutRem, "WithoutRem"},
    {Strategy::FRandom, "FRandom"},       {Strategy::FCon, "FCon"},             {Strategy::FPath, "FPath"},
    {Strategy::FBehavior, "FBehavior"},
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t iteration, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(iteration), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Member {
  Scenario scenario;
  Fitness fitness;
};

struct Offspring {
  bool produced = false;
  bool valid = false;
  Scenario scenario;
  SimResult sim;
  ConsistencyVerdict verdict;
  Fitness fitness;
};

json scenario_json(const Scenario& s) { return json::parse(save_scenario(s)); }

json fitness_json(const Fitness& f) { return json{{"f_p", f.f_p}, {"f_b", f.f_b}, {"total", f.total}}; }

}  // namespace

const char* to_string(Strategy s) {
  for (const auto& n : kNames) {
    if (n.strategy == s) return n.name;
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  const std::string key = lower(name);
  for (const auto& n : kNames) {
    if (lower(n.name) == key) return n.strategy;
  }
  throw UnknownStrategy("unknown strategy: " + std::string(name));
}

const std::vector<Strategy>& all_strategies() {
  static const std::vector<Strategy> all = [] {
    std::vector<Strategy> v;
    for (const auto& n : kNames) v.push_back(n.strategy);
    return v;
  }();
  return all;
}

void EngineConfig::validate() const {
  if (population_n < 1) throw ConfigError("population_n must be >= 1");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must be in [0, 1)");
  if (!(grid_size > 0.0)) throw ConfigError("grid_size must be > 0");
  if (budget_seconds && !(*budget_seconds > 0.0)) throw ConfigError("budget_seconds must be > 0");
  mutation.validate();
  sim.validate();
}

StrategyPlan strategy_dispatch(const EngineConfig& cfg) {
  StrategyPlan plan;
  plan.mutation_cfg = cfg.mutation;
  switch (cfg.strategy) {
    case Strategy::Decictor: break;
    case Strategy::Random:
      plan.mutation = MutationMode::Unconstrained;
      plan.feedback = FeedbackMode::None;
      plan.selection = SelectionMode::Uniform;
      break;
    case Strategy::RandomDelta:
      plan.feedback = FeedbackMode::None;
      plan.selection = SelectionMode::Uniform;
      break;
    case Strategy::WithoutCons: plan.mutation = MutationMode::Unconstrained; break;
    case Strategy::WithoutMot: plan.mutation_cfg.delta_t = cfg.sim.sim_dt; break;
    case Strategy::WithoutRem: plan.mutation_cfg.op_weights = {1.0, 0.0, 0.0}; break;
    case Strategy::FRandom: plan.selection = SelectionMode::Uniform; break;
    case Strategy::FCon: plan.feedback = FeedbackMode::Consistency; break;
    case Strategy::FPath: plan.feedback = FeedbackMode::PathOnly; break;
    case Strategy::FBehavior: plan.feedback = FeedbackMode::BehaviorOnly; break;
  }
  return plan;
}

double CampaignResult::mutation_valid_pct() const {
  return mutation_attempts == 0 ? 0.0
                                : 100.0 * static_cast<double>(mutation_valid) / static_cast<double>(mutation_attempts);
}

std::string participant_set_key(const Scenario& s) {
  std::vector<std::string> parts;
  for (Participant p : s.participants) {
    p.id.clear();
    Scenario one;
    one.participants.push_back(std::move(p));
    parts.push_back(json::parse(save_scenario(one))["participants"][0].dump());
  }
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (const auto& p : parts) key += p + "\n";
  return key;
}

std::size_t CampaignResult::unique_nods() const {
  std::set<std::string> keys;
  for (const auto& n : nods) keys.insert(participant_set_key(n.scenario));
  return keys.size();
}

CampaignResult run_campaign(const Scenario& seed, const RoadMap& map, const PlannerInterface& planner,
                            const EngineConfig& cfg) {
  cfg.validate();
  const StrategyPlan plan = strategy_dispatch(cfg);
  plan.mutation_cfg.validate();

  if (const auto problems = validate_scenario(seed, &map, cfg.sim.ego.footprint); !problems.empty())
    throw SeedRejected("seed is invalid: " + problems.front());
  const SimResult seed_run = simulate(seed, map, planner, cfg.sim, cfg.rng_seed);
  if (seed_run.outcome.status != TaskStatus::Completed)
    throw SeedRejected(std::string("seed does not complete its task: ") + to_string(seed_run.outcome.status));

  const Observation& seed_obs = seed_run.observation;
  const DrivingPath tau_star = ego_path(seed_obs);
  const GridSpec grid = grid_for_map(map, cfg.grid_size);
  const GridCellSet cells_star = covered_grids(tau_star, grid);
  const FeatureScaling scaling = FeatureScaling::fit(behavior_series(seed_obs));
  const MutationContext ctx(map, seed, seed_obs, cfg.sim.ego.footprint);

  CampaignResult result;
  result.strategy = to_string(cfg.strategy);
  result.seed_id = seed.id;
  result.rng_seed = cfg.rng_seed;
  result.seed_observation = seed_obs;

  std::vector<Member> population(cfg.population_n, Member{seed, Fitness{}});

  auto evaluate = [&](const Observation& obs, double similarity) {
    switch (plan.feedback) {
      case FeedbackMode::Full: return fitness(seed_obs, obs, scaling, cfg.kernel);
      case FeedbackMode::PathOnly: return Fitness::of(path_feedback(tau_star, ego_path(obs)), 0.0);
      case FeedbackMode::BehaviorOnly:
        return Fitness::of(0.0, mmd(behavior_series(seed_obs, scaling), behavior_series(obs, scaling), cfg.kernel));
      case FeedbackMode::Consistency: return Fitness::of(1.0 - similarity, 0.0);
      case FeedbackMode::None: break;
    }
    return Fitness{};
  };

  const auto started = std::chrono::steady_clock::now();
  auto out_of_budget = [&](std::size_t it) {
    if (cfg.budget_seconds) {
      const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - started;
      return spent.count() >= *cfg.budget_seconds;
    }
    return it >= cfg.iterations;
  };

  for (std::size_t it = 0; !out_of_budget(it); ++it) {
    std::vector<Offspring> kids(population.size());
    parallel_for(population.size(), cfg.jobs, [&](std::size_t i) {
      auto rng = stream(cfg.rng_seed, it, i);
      const MutationOutcome m = plan.mutation == MutationMode::NonInvasive
                                    ? mutate(ctx, population[i].scenario, plan.mutation_cfg, rng)
                                    : random_mutate(ctx, population[i].scenario, plan.mutation_cfg, rng);
      Offspring& kid = kids[i];
      if (m.aborted) return;
      kid.produced = true;
      kid.scenario = m.scenario;
      kid.scenario.id = seed.id + "/it" + std::to_string(it) + "/c" + std::to_string(i);
      kid.valid = replay_validation(kid.scenario, tau_star, map, cfg.sim);
      kid.sim = simulate(kid.scenario, map, planner, cfg.sim, cfg.rng_seed);
      if (kid.sim.outcome.status != TaskStatus::Completed) return;
      const double sim = grid_similarity(cells_star, covered_grids(ego_path(kid.sim.observation), grid));
      kid.verdict = ConsistencyVerdict{sim, sim > cfg.epsilon, cfg.epsilon};
      kid.fitness = evaluate(kid.sim.observation, sim);
    });

    IterationLog entry;
    entry.iteration = it;
    std::vector<Member> pool = population;
    for (auto& kid : kids) {
      if (!kid.produced) continue;
      ++entry.offspring;
      ++result.mutation_attempts;
      if (kid.valid) ++result.mutation_valid;
      if (kid.sim.outcome.status != TaskStatus::Completed) continue;
      ++entry.completed;
      if (is_nods(kid.sim.outcome, kid.verdict)) {
        ++entry.nods_found;
        result.nods.push_back(NoDSRecord{kid.scenario, std::move(kid.sim.observation), kid.sim.outcome, kid.verdict, it,
                                         kid.fitness});
      } else {
        pool.push_back(Member{std::move(kid.scenario), kid.fitness});
      }
    }

    // Selection from Q and Q', Q first so ties favour incumbents.
    std::vector<std::size_t> keep;
    const std::size_t n = std::min(cfg.population_n, pool.size());
    auto rng = stream(cfg.rng_seed, it, 0xFFFFFFFFu);
    if (plan.selection == SelectionMode::Uniform) {
      std::vector<std::size_t> all(pool.size());
      std::iota(all.begin(), all.end(), std::size_t{0});
      std::sample(all.begin(), all.end(), std::back_inserter(keep), n, rng);
    } else if (cfg.probabilistic_selection) {
      std::vector<double> w;
      for (const auto& m : pool) w.push_back(m.fitness.total + 1e-12);
      for (std::size_t k = 0; k < n; ++k) {
        std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
        const std::size_t j = pick(rng);
        keep.push_back(j);
        w[j] = 0.0;
      }
    } else {
      std::vector<double> totals;
      for (const auto& m : pool) totals.push_back(m.fitness.total);
      keep = top_n_indices(totals, n);
    }
    std::vector<Member> next;
    for (std::size_t j : keep) next.push_back(pool[j]);
    population = std::move(next);
    for (const auto& m : population) entry.population_fitness.push_back(m.fitness.total);
    result.log.push_back(std::move(entry));
    result.iterations_run = it + 1;
  }
  for (const auto& m : population) result.final_population.push_back(m.scenario);
  return result;
}

std::string campaign_json(const CampaignResult& r) {
  json nods = json::array();
  for (std::size_t k = 0; k < r.nods.size(); ++k) {
    const auto& n = r.nods[k];
    nods.push_back(json{{"index", k},
                        {"iteration", n.iteration},
                        {"similarity", n.verdict.similarity},
                        {"threshold", n.verdict.threshold},
                        {"consistent", n.verdict.consistent},
                        {"outcome", to_string(n.outcome.status)},
                        {"elapsed_s", n.outcome.elapsed},
                        {"fitness", fitness_json(n.fitness)},
                        {"scenario", scenario_json(n.scenario)}});
  }
  json log = json::array();
  for (const auto& e : r.log) {
    log.push_back(json{{"iteration", e.iteration},
                       {"population_fitness", e.population_fitness},
                       {"offspring", e.offspring},
                       {"completed", e.completed},
                       {"nods_found", e.nods_found}});
  }
  json population = json::array();
  for (const auto& s : r.final_population) population.push_back(scenario_json(s));
  const json doc{{"strategy", r.strategy},
                 {"seed_id", r.seed_id},
                 {"rng_seed", r.rng_seed},
                 {"iterations_run", r.iterations_run},
                 {"mutation_attempts", r.mutation_attempts},
                 {"mutation_valid", r.mutation_valid},
                 {"mutation_valid_pct", r.mutation_valid_pct()},
                 {"nods_count", r.nods.size()},
                 {"unique_nods", r.unique_nods()},
                 {"nods", std::move(nods)},
                 {"fitness_log", std::move(log)},
                 {"final_population", std::move(population)}};
  return doc.dump(2) + "\n";
}

void write_campaign(const CampaignResult& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "nods", ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());
  write_file((fs::path(out_dir) / "result.json").string(), campaign_json(r));
  write_file((fs::path(out_dir) / "seed.observation.json").string(), save_observation(r.seed_observation));
  for (std::size_t k = 0; k < r.nods.size(); ++k) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "nods_%04zu", k);
    const fs::path base = fs::path(out_dir) / "nods" / stem;
    write_file(base.string() + ".scenario.json", save_scenario(r.nods[k].scenario));
    write_file(base.string() + ".observation.json", save_observation(r.nods[k].observation));
  }
}

std::vector<ComparisonRow> compare_strategies(const Scenario& seed, const RoadMap& map,
                                              const PlannerInterface& planner, const std::vector<Strategy>& strategies,
                                              std::size_t repeats, const EngineConfig& base) {
  std::vector<ComparisonRow> rows;
  for (Strategy s : strategies) {
    for (std::size_t r = 0; r < repeats; ++r) {
      EngineConfig cfg = base;
      cfg.strategy = s;
      cfg.rng_seed = base.rng_seed + r;
      const auto t0 = std::chrono::steady_clock::now();
      const CampaignResult res = run_campaign(seed, map, planner, cfg);
      const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - t0;
      rows.push_back(ComparisonRow{to_string(s), seed.id, cfg.rng_seed, res.nods.size(), res.mutation_valid_pct(),
                                   wall.count()});
    }
  }
  return rows;
}

}  // namespace nods
