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

// nodsearch: command-line front end.
//
//   nodsearch run           --map M --seed-scenario S --out DIR [--strategy ...]
//   nodsearch validate-seed --map M --seed-scenario S [--out FILE.svg]
//   nodsearch replay        --map M --seed-scenario S --scenario MUTATED
//   nodsearch render        --map M --scenario S [--observation O]... --out FILE.svg
//   nodsearch compare       --map M --seed-scenario S --out FILE.csv [--strategies a,b] [--repeats N]

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nods/engine.hpp"
#include "nods/planner.hpp"
#include "nods/report.hpp"

namespace {

using json = nlohmann::json;

struct Flags {
  std::optional<std::string> map;
  std::optional<std::string> seed_scenario;
  std::optional<std::string> out;
  std::optional<std::string> strategy;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> population;
  std::optional<double> epsilon;
  std::optional<double> grid_size;
  std::optional<double> delta_t;
  std::optional<std::uint64_t> rng_seed;
  std::optional<std::string> planner_preset;
  std::optional<std::size_t> jobs;
  std::optional<std::string> config;
};

struct Settings {
  std::string map;
  std::string seed_scenario;
  std::string out;
  std::string planner_preset = "default";
  nods::EngineConfig engine;
};

template <typename T>
void take(std::optional<T>& slot, const json& doc, const char* key) {
  if (slot || !doc.contains(key)) return;
  try {
    slot = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw nods::ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

// CLI > config file > defaults.
Settings resolve(Flags f) {
  if (f.config) {
    json doc;
    try {
      doc = json::parse(nods::read_file(*f.config));
    } catch (const json::exception& e) {
      throw nods::ConfigError("config file: " + std::string(e.what()));
    }
    take(f.map, doc, "map");
    take(f.seed_scenario, doc, "seed_scenario");
    take(f.out, doc, "out");
    take(f.strategy, doc, "strategy");
    take(f.iterations, doc, "iterations");
    take(f.population, doc, "population");
    take(f.epsilon, doc, "epsilon");
    take(f.grid_size, doc, "grid_size");
    take(f.delta_t, doc, "delta_t");
    take(f.rng_seed, doc, "rng_seed");
    take(f.planner_preset, doc, "planner_preset");
    take(f.jobs, doc, "jobs");
  }
  Settings s;
  s.map = f.map.value_or("");
  s.seed_scenario = f.seed_scenario.value_or("");
  s.out = f.out.value_or("");
  s.planner_preset = f.planner_preset.value_or("default");
  auto& e = s.engine;
  if (f.strategy) e.strategy = nods::parse_strategy(*f.strategy);
  if (f.iterations) e.iterations = *f.iterations;
  if (f.population) e.population_n = *f.population;
  if (f.epsilon) e.epsilon = *f.epsilon;
  if (f.grid_size) e.grid_size = *f.grid_size;
  if (f.delta_t) e.mutation.delta_t = *f.delta_t;
  if (f.rng_seed) e.rng_seed = *f.rng_seed;
  if (f.jobs) e.jobs = *f.jobs;
  e.validate();
  return s;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--map", f.map, "Road map JSON");
  app->add_option("--seed-scenario", f.seed_scenario, "Seed scenario JSON");
  app->add_option("--out", f.out, "Output path");
  app->add_option("--strategy", f.strategy, "Search strategy");
  app->add_option("--iterations", f.iterations, "Iteration budget");
  app->add_option("--population", f.population, "Population size");
  app->add_option("--epsilon", f.epsilon, "Consistency threshold");
  app->add_option("--grid-size", f.grid_size, "Grid cell size in meters");
  app->add_option("--delta-t", f.delta_t, "Mutation time step in seconds");
  app->add_option("--rng-seed", f.rng_seed, "Campaign rng seed");
  app->add_option("--planner-preset", f.planner_preset, "default or timid")->check(CLI::IsMember({"default", "timid"}));
  app->add_option("--jobs", f.jobs, "Worker threads");
  app->add_option("--config", f.config, "JSON config file");
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw nods::ConfigError(std::string(flag) + " is required");
}

nods::RoadMap load_map_checked(const Settings& s) {
  require(s.map, "--map");
  return nods::load_map_file(s.map);
}

nods::Scenario load_seed_checked(const Settings& s) {
  require(s.seed_scenario, "--seed-scenario");
  return nods::load_scenario_file(s.seed_scenario);
}

nods::ReferencePlanner make_planner(const nods::RoadMap& map, const Settings& s) {
  return nods::ReferencePlanner(map, nods::PlannerParams::preset(s.planner_preset, s.engine.sim.ego.footprint));
}

int cmd_run(const Settings& s) {
  require(s.out, "--out");
  const auto map = load_map_checked(s);
  const auto seed = load_seed_checked(s);
  const auto planner = make_planner(map, s);
  try {
    const auto result = nods::run_campaign(seed, map, planner, s.engine);
    nods::write_campaign(result, s.out);
    std::cout << "strategy " << result.strategy << ": " << result.nods.size() << " NoDS (" << result.unique_nods()
              << " unique), %mutation " << result.mutation_valid_pct() << " over " << result.iterations_run
              << " iterations\n";
  } catch (const nods::SeedRejected& e) {
    std::cerr << "seed rejected: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_validate_seed(const Settings& s) {
  const auto map = load_map_checked(s);
  const auto seed = load_seed_checked(s);
  const auto problems = nods::validate_scenario(seed, &map, s.engine.sim.ego.footprint);
  for (const auto& p : problems) std::cout << "invalid: " << p << "\n";
  const auto planner = make_planner(map, s);
  const auto run = nods::simulate(seed, map, planner, s.engine.sim, s.engine.rng_seed);
  std::cout << "outcome: " << nods::to_string(run.outcome.status) << " after " << run.outcome.elapsed << " s\n";
  if (run.outcome.collision_pair)
    std::cout << "collision: " << run.outcome.collision_pair->first << " / " << run.outcome.collision_pair->second
              << "\n";
  const auto grid = nods::grid_for_map(map, s.engine.grid_size);
  const auto path = nods::ego_path(run.observation);
  const auto cells = nods::covered_grids(path, grid);
  std::cout << "covered grids (" << cells.size() << "):";
  for (const auto& [i, j] : cells.cells) std::cout << " (" << i << "," << j << ")";
  std::cout << "\n";
  if (!s.out.empty()) {
    nods::RenderOptions opt;
    opt.grid = true;
    opt.grid_spec = grid;
    nods::write_file(s.out, nods::render_svg(map, seed, {{path, "ego", "#1f77b4", false, true}}, opt));
  }
  return problems.empty() && run.outcome.status == nods::TaskStatus::Completed ? 0 : 1;
}

int cmd_replay(const Settings& s, const std::string& mutated_path) {
  require(mutated_path, "--scenario");
  const auto map = load_map_checked(s);
  const auto seed = load_seed_checked(s);
  const auto planner = make_planner(map, s);
  const auto run = nods::simulate(seed, map, planner, s.engine.sim, s.engine.rng_seed);
  const auto mutated = nods::load_scenario_file(mutated_path);
  const bool ok = nods::replay_validation(mutated, nods::ego_path(run.observation), map, s.engine.sim);
  std::cout << (ok ? "replay: original path remains traversable\n" : "replay: original path is blocked\n");
  return ok ? 0 : 1;
}

int cmd_render(const Settings& s, const std::string& scenario_path, const std::vector<std::string>& observations,
               bool grid) {
  require(scenario_path, "--scenario");
  require(s.out, "--out");
  const auto map = load_map_checked(s);
  const auto scenario = nods::load_scenario_file(scenario_path);
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::vector<nods::PathLayer> layers;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const auto obs = nods::load_observation(nods::read_file(observations[i]));
    layers.push_back({nods::ego_path(obs), std::filesystem::path(observations[i]).filename().string(), colors[i % 4],
                      i > 0, grid});
  }
  nods::RenderOptions opt;
  opt.grid = grid;
  opt.grid_spec = nods::grid_for_map(map, s.engine.grid_size);
  nods::write_file(s.out, nods::render_svg(map, scenario, layers, opt));
  return 0;
}

int cmd_compare(const Settings& s, const std::vector<std::string>& names, std::size_t repeats) {
  require(s.out, "--out");
  const auto map = load_map_checked(s);
  const auto seed = load_seed_checked(s);
  const auto planner = make_planner(map, s);
  std::vector<nods::Strategy> strategies;
  for (const auto& n : names) strategies.push_back(nods::parse_strategy(n));
  if (strategies.empty()) strategies = {nods::Strategy::Decictor, nods::Strategy::RandomDelta, nods::Strategy::Random};
  const auto rows = nods::compare_strategies(seed, map, planner, strategies, repeats, s.engine);
  nods::write_file(s.out, nods::comparison_csv(rows));
  for (const auto& r : rows) std::cout << r.strategy << " rng " << r.rng_seed << ": " << r.nods_count << " NoDS\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search for non-optimal path-planning decisions"};
  app.require_subcommand(1);

  Flags run_f, validate_f, replay_f, render_f, compare_f;
  auto* run = app.add_subcommand("run", "Run one search campaign");
  add_common(run, run_f);
  auto* validate = app.add_subcommand("validate-seed", "Simulate a candidate seed and report its path");
  add_common(validate, validate_f);
  auto* replay = app.add_subcommand("replay", "Check the seed's path against a mutated scenario");
  add_common(replay, replay_f);
  std::string replay_scenario;
  replay->add_option("--scenario", replay_scenario, "Mutated scenario JSON");
  auto* render = app.add_subcommand("render", "Draw a scenario and ego paths as SVG");
  add_common(render, render_f);
  std::string render_scenario;
  std::vector<std::string> render_obs;
  bool render_grid = false;
  render->add_option("--scenario", render_scenario, "Scenario JSON");
  render->add_option("--observation", render_obs, "Observation JSON (repeatable)");
  render->add_flag("--grid", render_grid, "Overlay the grid and covered cells");
  auto* compare = app.add_subcommand("compare", "Compare strategies over several rng seeds");
  add_common(compare, compare_f);
  std::vector<std::string> compare_names;
  std::size_t repeats = 10;
  compare->add_option("--strategies", compare_names, "Strategies to compare")->delimiter(',');
  compare->add_option("--repeats", repeats, "Campaigns per strategy");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(resolve(run_f));
    if (*validate) return cmd_validate_seed(resolve(validate_f));
    if (*replay) return cmd_replay(resolve(replay_f), replay_scenario);
    if (*render) return cmd_render(resolve(render_f), render_scenario, render_obs, render_grid);
    if (*compare) return cmd_compare(resolve(compare_f), compare_names, repeats);
  } catch (const nods::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
