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

#pragma once

/// JSON scenario files. The document mirrors ScenarioConfig field for
/// field; unknown keys are rejected.
///
///   {
///     "dt": 0.05, "duration": 60.0,
///     "metadata": {"scenario": "cyclist"},
///     "agents": [{
///       "id": "ego",
///       "paths": [[[0, 0], [300, 0]]],
///       "active_path": 0, "closed_end": false,
///       "s0": 0, "v0": 0, "radius": 1.0,
///       "model": {"a_max": 3.5, "a_brake_peak": 8, "brake_fraction": 0.9,
///                 "v_max": 40},
///       "plant": {"actuation_lag_tau": 0.3, "a_brake_peak": 8},
///       "safety": {"inflation_margin": 0.25},
///       "strategy": {"kind": "tightening", "beta": 1, "epsilon": 1,
///                    "conservative_fraction": 0.8, "release_hold_ticks": 0},
///       "guidance": {"kind": "full_throttle"}
///     }]
///   }
///
/// `active_path`, `closed_end`, `metadata`, `model.v_max`, and every key of
/// `strategy` except `kind` are optional. `guidance` kinds are
/// "full_throttle", "stationary" and "cruise_to" (which also takes
/// "target_speed" and optionally "gain").

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sdsim/sim.hpp"

namespace sdsim {

/// Throws ValidationError naming the offending field. The result has also
/// passed validate().
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::filesystem::path& file);

nlohmann::json scenario_to_json(const ScenarioConfig& config);

}  // namespace sdsim
