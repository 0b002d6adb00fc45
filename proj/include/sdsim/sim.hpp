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

/// Deterministic synchronous tick loop over a set of agents.
///
/// Every tick, all stopping regions are computed from one snapshot of the
/// agent states; each controller then decides from that snapshot, all
/// plants step together, and physical footprints are checked for contact.
/// The trial ends on the first tick with a collision.

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdsim/control.hpp"
#include "sdsim/dynamics.hpp"
#include "sdsim/geom.hpp"
#include "sdsim/safety.hpp"

namespace sdsim {

enum class GuidanceKind { FullThrottle, CruiseTo, Stationary };

std::string_view to_string(GuidanceKind kind);

struct GuidanceSpec {
  GuidanceKind kind = GuidanceKind::FullThrottle;
  double target_speed = 0.0;  ///< CruiseTo only [m/s]
  double gain = 1.0;          ///< CruiseTo proportional gain [1/s]
};

/// Acceleration requested by the (interaction-unaware) guidance policy.
/// FullThrottle requests a_max, trimmed so one tick does not exceed the
/// model speed cap.
double guidance_accel(const GuidanceSpec& guidance, const AgentStated& state,
                      const ModelParamsd& model, double dt);

struct AgentSpec {
  AgentId id;
  std::vector<Path2d> paths;
  std::size_t active_path = 0;
  bool closed_end = false;
  double s0 = 0.0;
  double v0 = 0.0;
  double radius = 1.0;
  ModelParamsd model;
  PlantParamsd plant;
  double inflation_margin = 0.25;
  Strategy strategy;
  GuidanceSpec guidance;

  /// Safety parameters implied by the model and strategy.
  SafetyParams safety() const;
};

struct ScenarioConfig {
  double dt = 0.05;
  double duration = 60.0;
  std::vector<AgentSpec> agents;
  std::map<std::string, std::string> metadata;

  std::size_t tick_count() const;
};

/// Raised by validate() and the scenario reader; `field()` names the
/// offending entry, e.g. "agents[1].radius".
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

void validate(const ScenarioConfig& config);

/// Translates a model-level command into the plant's acceleration request.
/// Braking is expressed relative to the braking authority the model plans
/// with; the vehicle realizes it relative to its true peak.
double plant_request(double a_cmd, double model_decel,
                     const PlantParamsd& plant);

struct TickRecord {
  double t = 0.0;
  AgentId agent_id;
  double s = 0.0;
  double v = 0.0;
  double a_cmd = 0.0;
  double a_applied = 0.0;
  bool contingency = false;
  double a_hi_eff = 0.0;
  double gap = 0.0;
  bool disjoint = false;

  friend bool operator==(const TickRecord&, const TickRecord&) = default;
};

struct CollisionEvent {
  double t = 0.0;
  AgentId agent_a;
  AgentId agent_b;
  double penetration = 0.0;

  friend bool operator==(const CollisionEvent&,
                         const CollisionEvent&) = default;
};

struct DanceEvent {
  AgentId agent_id;
  DanceReport report;
};

struct TrialLog {
  ScenarioConfig config;
  /// Ordered by (tick, agent id).
  std::vector<TickRecord> records;
  std::vector<CollisionEvent> collisions;
  std::vector<DanceEvent> dances;
  std::size_t ticks_run = 0;
  bool terminated_by_collision = false;

  std::vector<TickRecord> records_for(const AgentId& id) const;
};

/// Physical footprint of one agent at its current position.
struct Body {
  AgentId id;
  Point2d center;
  double radius = 1.0;
};

/// Pairwise disc overlap with physical radii; strict, so touching is not a
/// collision.
std::vector<CollisionEvent> collision_check(std::span<const Body> bodies,
                                            double t);

/// Throws ValidationError when the config is invalid.
TrialLog run_trial(const ScenarioConfig& config);

}  // namespace sdsim
