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

#include "sdsim/control.hpp"
#include "sdsim/sim.hpp"

namespace sdsim {

/// Calibrated actuation lag of the cyclist scenario: the smallest value of
/// {0.1, ..., 0.5} s for which the unmitigated run collides and the
/// conservative one does not.
inline constexpr double kCalibratedLagTau = 0.3;

/// Tightening shape used by the cyclist scenario.
inline constexpr double kScenarioTighteningBeta = 0.1;
inline constexpr double kScenarioTighteningEpsilon = 15.0;

inline constexpr double kCyclistPosition = 225.0;

/// Strategy as configured for the cyclist scenario.
Strategy scenario_strategy(StrategyKind kind);

/// A full-throttle vehicle on a straight 300 m road towards a stationary
/// cyclist at 225 m.
ScenarioConfig paper_scenario(const Strategy& strategy,
                              double lag_tau = kCalibratedLagTau);
ScenarioConfig paper_scenario(StrategyKind kind,
                              double lag_tau = kCalibratedLagTau);

/// Two mirrored agents driving head-on at each other at full throttle on a
/// shared 200 m line, both unmitigated with greedy contingency release.
ScenarioConfig corridor_scenario(double lag_tau = 0.0,
                                 double inflation_margin = 0.25);

}  // namespace sdsim
