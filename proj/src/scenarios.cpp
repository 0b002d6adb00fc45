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

#include "sdsim/scenarios.hpp"

#include <sstream>

namespace sdsim {

namespace {

std::string format_number(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

}  // namespace

Strategy scenario_strategy(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Tightening:
      return Strategy::tightening(kScenarioTighteningBeta,
                                  kScenarioTighteningEpsilon);
    case StrategyKind::Conservative:
      return Strategy::conservative();
    case StrategyKind::None:
      break;
  }
  return Strategy::none();
}

ScenarioConfig paper_scenario(const Strategy& strategy, double lag_tau) {
  ScenarioConfig config;
  config.dt = 0.05;
  config.duration = 60.0;

  AgentSpec ego;
  ego.id = "ego";
  ego.paths = {Path2d({Point2d(0.0, 0.0), Point2d(300.0, 0.0)})};
  ego.radius = 1.0;
  ego.model = ModelParamsd{3.5, 8.0, 0.9, 40.0};
  ego.plant = PlantParamsd{lag_tau, 8.0};
  ego.inflation_margin = 0.25;
  ego.strategy = strategy;
  ego.guidance = GuidanceSpec{GuidanceKind::FullThrottle};

  // The cyclist's footprint is known exactly, so it carries no inflation.
  AgentSpec cyclist;
  cyclist.id = "cyclist";
  cyclist.paths = {Path2d({Point2d(kCyclistPosition, 0.0)})};
  cyclist.radius = 0.5;
  cyclist.model = ModelParamsd{3.5, 8.0, 0.9, 40.0};
  cyclist.plant = PlantParamsd{0.0, 8.0};
  cyclist.inflation_margin = 0.0;
  cyclist.strategy = Strategy::none();
  cyclist.guidance = GuidanceSpec{GuidanceKind::Stationary};

  config.agents = {ego, cyclist};
  config.metadata = {
      {"scenario", "cyclist"},
      {"strategy", std::string(to_string(strategy.kind))},
      {"actuation_lag_tau", format_number(lag_tau)},
      {"tau_calibration",
       "smallest tau in {0.1,0.2,0.3,0.4,0.5} s with none colliding and "
       "conservative not colliding: " +
           format_number(kCalibratedLagTau)},
  };
  return config;
}

ScenarioConfig paper_scenario(StrategyKind kind, double lag_tau) {
  return paper_scenario(scenario_strategy(kind), lag_tau);
}

ScenarioConfig corridor_scenario(double lag_tau, double inflation_margin) {
  ScenarioConfig config;
  config.dt = 0.05;
  config.duration = 60.0;

  // Symmetric about the origin so the two agents' arithmetic mirrors exactly.
  const Point2d west(-100.0, 0.0);
  const Point2d east(100.0, 0.0);

  AgentSpec a;
  a.id = "A";
  a.paths = {Path2d({west, east})};
  a.radius = 1.0;
  a.model = ModelParamsd{3.5, 8.0, 0.9, 40.0};
  a.plant = PlantParamsd{lag_tau, 8.0};
  a.inflation_margin = inflation_margin;
  a.strategy = Strategy::none();
  a.guidance = GuidanceSpec{GuidanceKind::FullThrottle};

  AgentSpec b = a;
  b.id = "B";
  b.paths = {Path2d({east, west})};

  config.agents = {a, b};
  config.metadata = {
      {"scenario", "corridor"},
      {"actuation_lag_tau", format_number(lag_tau)},
  };
  return config;
}

}  // namespace sdsim
