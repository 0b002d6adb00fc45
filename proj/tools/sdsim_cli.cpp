// Copyright 2026 The sdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.
//
// Exit codes: 0 success, 1 invalid input, 2 trial ended in a collision.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdsim/report.hpp"
#include "sdsim/scenario_io.hpp"
#include "sdsim/scenarios.hpp"
#include "sdsim/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitCollision = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool dump_config = false;
};

sdsim::StrategyKind require_strategy(const std::string& text) {
  const auto kind = sdsim::parse_strategy_kind(text);
  if (!kind) {
    throw sdsim::ValidationError("--strategy", "unknown strategy '" + text + "'");
  }
  return *kind;
}

int execute(const sdsim::ScenarioConfig& config, const Common& common) {
  if (common.dump_config) {
    std::cout << sdsim::scenario_to_json(config).dump(2) << '\n';
  }
  const sdsim::TrialLog log = sdsim::run_trial(config);
  const sdsim::TrialSummary summary = sdsim::summarize(log);
  nlohmann::json doc = sdsim::summary_to_json(summary);
  if (common.seed) doc["seed"] = *common.seed;

  if (!common.out_dir.empty()) {
    sdsim::export_trial(log, common.out_dir);
    std::ofstream(std::filesystem::path(common.out_dir) / "summary.json")
        << doc.dump(2) << '\n';
  }
  std::cout << doc.dump(2) << '\n';
  for (const auto& c : log.collisions) {
    std::cerr << "collision at t=" << c.t << " between " << c.agent_a
              << " and " << c.agent_b << '\n';
  }
  return log.terminated_by_collision ? kExitCollision : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stopping-region safety simulator"};
  app.require_subcommand(1);

  Common common;
  app.add_option("--seed", common.seed,
                 "Echoed in the output; the simulation is deterministic");

  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("--out", common.out_dir,
                    "Directory for log.csv, trial.json and summary.json");
    cmd->add_flag("--dump-config", common.dump_config,
                  "Print the resolved scenario before running");
  };

  std::string scenario_file;
  std::string strategy_text;

  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_file)->required();
  run->add_option("--strategy", strategy_text,
                  "Override the strategy of every non-stationary agent");
  add_run_options(run);

  double tau = sdsim::kCalibratedLagTau;
  auto* paper = app.add_subcommand("paper-scenario",
                                   "Full throttle toward a stationary cyclist");
  paper->add_option("--strategy", strategy_text)->required();
  paper->add_option("--tau", tau, "Actuation lag [s]");
  add_run_options(paper);

  double corridor_tau = 0.0;
  double inflation = 0.25;
  auto* corridor = app.add_subcommand("corridor", "Two agents head-on");
  corridor->add_option("--tau", corridor_tau, "Actuation lag [s]");
  corridor->add_option("--inflation", inflation, "Inflation margin [m]");
  add_run_options(corridor);

  std::vector<std::string> summary_files;
  bool as_json = false;
  auto* cmp = app.add_subcommand("compare", "Tabulate summary files");
  cmp->add_option("summaries", summary_files)->required();
  cmp->add_flag("--json", as_json);

  auto* val = app.add_subcommand("validate", "Check a scenario file");
  val->add_option("scenario", scenario_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (common.seed) std::cerr << "seed: " << *common.seed << '\n';

  try {
    if (*run) {
      sdsim::ScenarioConfig config = sdsim::load_scenario(scenario_file);
      if (!strategy_text.empty()) {
        const auto kind = require_strategy(strategy_text);
        for (auto& agent : config.agents) {
          if (agent.guidance.kind != sdsim::GuidanceKind::Stationary) {
            agent.strategy.kind = kind;
          }
        }
        config.metadata["strategy"] = std::string(sdsim::to_string(kind));
      }
      return execute(config, common);
    }
    if (*paper) {
      return execute(
          sdsim::paper_scenario(require_strategy(strategy_text), tau), common);
    }
    if (*corridor) {
      sdsim::ScenarioConfig config =
          sdsim::corridor_scenario(corridor_tau, inflation);
      sdsim::validate(config);
      return execute(config, common);
    }
    if (*cmp) {
      std::vector<sdsim::TrialSummary> rows;
      for (const auto& file : summary_files) {
        std::ifstream in(file);
        if (!in) throw sdsim::ValidationError(file, "cannot open");
        nlohmann::json doc;
        try {
          doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
          throw sdsim::ValidationError(file, e.what());
        }
        rows.push_back(sdsim::summary_from_json(doc));
      }
      const sdsim::ComparisonTable table = sdsim::compare(rows);
      if (as_json) {
        std::cout << table.to_json().dump(2) << '\n';
      } else {
        std::cout << table.to_text();
      }
      return kExitOk;
    }
    if (*val) {
      const sdsim::ScenarioConfig config = sdsim::load_scenario(scenario_file);
      std::cout << "ok: " << config.agents.size() << " agents, "
                << config.tick_count() << " ticks\n";
      return kExitOk;
    }
  } catch (const sdsim::ValidationError& e) {
    std::cerr << "invalid " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}
