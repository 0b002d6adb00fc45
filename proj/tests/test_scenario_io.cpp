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

#include <gtest/gtest.h>

#include "sdsim/scenario_io.hpp"
#include "sdsim/scenarios.hpp"

namespace sdsim {
namespace {

const char* kMinimal = R"({
  "dt": 0.05, "duration": 2.0,
  "agents": [{
    "id": "ego", "paths": [[[0, 0], [100, 0]]],
    "s0": 0, "v0": 5, "radius": 1.0,
    "model": {"a_max": 3.5, "a_brake_peak": 8, "brake_fraction": 0.9},
    "plant": {"actuation_lag_tau": 0.1, "a_brake_peak": 8},
    "safety": {"inflation_margin": 0.25},
    "strategy": {"kind": "Tightening"},
    "guidance": {"kind": "cruise_to", "target_speed": 10}
  }]
})";

std::string field_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<accepted>";
}

std::string replace(std::string text, const std::string& from,
                    const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return text.replace(pos, from.size(), to);
}

TEST(ScenarioIo, ParsesMinimalDocument) {
  const ScenarioConfig c = parse_scenario(kMinimal);
  ASSERT_EQ(c.agents.size(), 1u);
  const AgentSpec& a = c.agents[0];
  EXPECT_EQ(a.strategy.kind, StrategyKind::Tightening);
  EXPECT_EQ(a.strategy.beta, 1.0);
  EXPECT_EQ(a.model.v_max, 40.0);
  EXPECT_EQ(a.guidance.kind, GuidanceKind::CruiseTo);
  EXPECT_EQ(a.guidance.target_speed, 10.0);
  EXPECT_EQ(a.paths[0].length(), 100.0);
  EXPECT_EQ(c.tick_count(), 40u);
}

TEST(ScenarioIo, RejectsUnknownKeys) {
  EXPECT_EQ(field_of(replace(kMinimal, "\"dt\"", "\"colour\": 1, \"dt\"")),
            "colour");
  EXPECT_EQ(field_of(replace(kMinimal, "\"a_max\"", "\"a_min\": 1, \"a_max\"")),
            "agents[0].model.a_min");
  EXPECT_EQ(field_of(replace(kMinimal, "\"kind\": \"Tightening\"",
                             "\"kind\": \"Tightening\", \"gamma\": 2")),
            "agents[0].strategy.gamma");
}

TEST(ScenarioIo, ReportsMissingAndMistypedFields) {
  EXPECT_EQ(field_of(replace(kMinimal, "\"s0\": 0, ", "")), "agents[0].s0");
  EXPECT_EQ(field_of(replace(kMinimal, "\"radius\": 1.0", "\"radius\": \"1\"")),
            "agents[0].radius");
  EXPECT_EQ(field_of(replace(kMinimal, "\"Tightening\"", "\"reckless\"")),
            "agents[0].strategy.kind");
  EXPECT_EQ(field_of(replace(kMinimal, ", \"target_speed\": 10", "")),
            "agents[0].guidance.target_speed");
  EXPECT_EQ(field_of(replace(kMinimal, "[[0, 0], [100, 0]]",
                             "[[0, 0], [0, 0]]")),
            "agents[0].paths[0]");
  EXPECT_EQ(field_of("{not json"), "<document>");
}

TEST(ScenarioIo, RunsSemanticValidation) {
  EXPECT_EQ(field_of(replace(kMinimal, "\"brake_fraction\": 0.9",
                             "\"brake_fraction\": 1.5")),
            "agents[0].model.brake_fraction");
  EXPECT_EQ(field_of(replace(kMinimal, "\"dt\": 0.05", "\"dt\": -1")), "dt");
}

TEST(ScenarioIo, RoundTrip) {
  for (auto kind : {StrategyKind::Tightening, StrategyKind::Conservative,
                    StrategyKind::None}) {
    const ScenarioConfig c = paper_scenario(kind);
    const ScenarioConfig back = scenario_from_json(scenario_to_json(c));
    EXPECT_EQ(scenario_to_json(back), scenario_to_json(c));
    EXPECT_EQ(run_trial(back).records, run_trial(c).records);
  }
}

}  // namespace
}  // namespace sdsim
