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

#include "sdsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace sdsim {

namespace {

std::string agent_field(std::size_t i, const char* name) {
  std::ostringstream out;
  out << "agents[" << i << "]." << name;
  return out.str();
}

void require(bool ok, const std::string& field, const char* message) {
  if (!ok) throw ValidationError(field, message);
}

// Slides a window of `window_s` over the flags and reports the first window
// that reaches the threshold.
std::optional<DanceReport> first_dance(std::span<const Command> commands,
                                       double dt, int threshold,
                                       double window_s) {
  const auto width =
      static_cast<std::size_t>(std::ceil(window_s / dt - 1e-9));
  if (width == 0 || commands.size() < width) return std::nullopt;
  for (std::size_t start = 0; start + width <= commands.size(); ++start) {
    auto report = detect_dance(commands.subspan(start, width),
                               static_cast<double>(start + 1) * dt, dt,
                               threshold, window_s);
    if (report.dance_detected) return report;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(GuidanceKind kind) {
  switch (kind) {
    case GuidanceKind::FullThrottle:
      return "full_throttle";
    case GuidanceKind::CruiseTo:
      return "cruise_to";
    case GuidanceKind::Stationary:
      return "stationary";
  }
  return "unknown";
}

double guidance_accel(const GuidanceSpec& guidance, const AgentStated& state,
                      const ModelParamsd& model, double dt) {
  switch (guidance.kind) {
    case GuidanceKind::FullThrottle:
      return std::min(model.a_max, (model.v_max - state.v) / dt);
    case GuidanceKind::CruiseTo:
      return guidance.gain * (guidance.target_speed - state.v);
    case GuidanceKind::Stationary:
      return -model.a_brake_peak;
  }
  return 0.0;
}

SafetyParams AgentSpec::safety() const {
  return SafetyParams{inflation_margin, strategy.contingency_decel(model)};
}

std::size_t ScenarioConfig::tick_count() const {
  return static_cast<std::size_t>(std::floor(duration / dt + 1e-9));
}

ValidationError::ValidationError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

void validate(const ScenarioConfig& config) {
  require(config.dt > 0.0 && std::isfinite(config.dt), "dt", "must be > 0");
  require(config.duration >= config.dt && std::isfinite(config.duration),
          "duration", "must be >= dt");
  require(!config.agents.empty(), "agents", "at least one agent required");

  std::set<AgentId> seen;
  for (std::size_t i = 0; i < config.agents.size(); ++i) {
    const AgentSpec& a = config.agents[i];
    require(!a.id.empty(), agent_field(i, "id"), "must be non-empty");
    require(seen.insert(a.id).second, agent_field(i, "id"), "duplicate id");
    require(!a.paths.empty(), agent_field(i, "paths"),
            "at least one path required");
    require(a.active_path < a.paths.size(), agent_field(i, "active_path"),
            "index out of range");
    for (const auto& p : a.paths) {
      require(a.s0 >= 0.0 && a.s0 <= p.length(), agent_field(i, "s0"),
              "must lie within every followable path");
    }
    require(a.v0 >= 0.0 && std::isfinite(a.v0), agent_field(i, "v0"),
            "must be >= 0");
    require(!a.paths[a.active_path].degenerate() || a.v0 == 0.0,
            agent_field(i, "v0"), "must be 0 on a single-vertex path");
    require(a.radius > 0.0, agent_field(i, "radius"), "must be > 0");
    require(a.model.a_max > 0.0, agent_field(i, "model.a_max"), "must be > 0");
    require(a.model.a_brake_peak > 0.0, agent_field(i, "model.a_brake_peak"),
            "must be > 0");
    require(a.model.brake_fraction > 0.0 && a.model.brake_fraction <= 1.0,
            agent_field(i, "model.brake_fraction"), "must be in (0, 1]");
    require(a.model.v_max > 0.0, agent_field(i, "model.v_max"), "must be > 0");
    require(a.plant.actuation_lag_tau >= 0.0,
            agent_field(i, "plant.actuation_lag_tau"), "must be >= 0");
    require(a.plant.a_brake_peak > 0.0, agent_field(i, "plant.a_brake_peak"),
            "must be > 0");
    require(a.inflation_margin >= 0.0, agent_field(i, "safety.inflation_margin"),
            "must be >= 0");
    require(a.strategy.beta >= 0.0, agent_field(i, "strategy.beta"),
            "must be >= 0");
    require(a.strategy.epsilon >= 0.0, agent_field(i, "strategy.epsilon"),
            "must be >= 0");
    require(a.strategy.conservative_fraction > 0.0 &&
                a.strategy.conservative_fraction <= 1.0,
            agent_field(i, "strategy.conservative_fraction"),
            "must be in (0, 1]");
    require(a.strategy.release_hold_ticks >= 0,
            agent_field(i, "strategy.release_hold_ticks"), "must be >= 0");
    require(a.guidance.target_speed >= 0.0,
            agent_field(i, "guidance.target_speed"), "must be >= 0");
    require(a.guidance.gain > 0.0, agent_field(i, "guidance.gain"),
            "must be > 0");
  }
}

double plant_request(double a_cmd, double model_decel,
                     const PlantParamsd& plant) {
  if (a_cmd >= 0.0) return a_cmd;
  return std::max(a_cmd * (plant.a_brake_peak / model_decel),
                  -plant.a_brake_peak);
}

std::vector<TickRecord> TrialLog::records_for(const AgentId& id) const {
  std::vector<TickRecord> out;
  for (const auto& r : records) {
    if (r.agent_id == id) out.push_back(r);
  }
  return out;
}

std::vector<CollisionEvent> collision_check(std::span<const Body> bodies,
                                            double t) {
  std::vector<CollisionEvent> events;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    for (std::size_t j = i + 1; j < bodies.size(); ++j) {
      const double reach = bodies[i].radius + bodies[j].radius;
      const double dist = (bodies[i].center - bodies[j].center).norm();
      if (dist < reach) {
        events.push_back({t, bodies[i].id, bodies[j].id, reach - dist});
      }
    }
  }
  return events;
}

TrialLog run_trial(const ScenarioConfig& config) {
  validate(config);

  TrialLog log;
  log.config = config;

  // Agents are processed in id order so the log does not depend on the
  // order they were declared in.
  std::vector<std::size_t> order(config.agents.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return config.agents[a].id < config.agents[b].id;
  });
  std::vector<const AgentSpec*> agents;
  for (std::size_t i : order) agents.push_back(&config.agents[i]);

  const std::size_t n = agents.size();
  std::vector<AgentStated> states(n);
  std::vector<SafetyParams> safety(n);
  std::vector<int> hold(n, 0);
  std::vector<std::vector<Command>> commands(n);
  for (std::size_t i = 0; i < n; ++i) {
    states[i].s = agents[i]->s0;
    states[i].v = agents[i]->v0;
    safety[i] = agents[i]->safety();
  }

  const std::size_t ticks = config.tick_count();
  log.records.reserve(ticks * n);
  std::vector<StoppingRegion> regions(n);
  std::vector<StoppingRegion> others;

  for (std::size_t k = 1; k <= ticks; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      regions[i] = stopping_region(states[i], agents[i]->paths, safety[i],
                                   agents[i]->radius, agents[i]->id,
                                   agents[i]->closed_end);
    }

    std::vector<Command> decided(n);
    std::vector<double> gaps(n);
    std::vector<bool> disjoint(n);
    for (std::size_t i = 0; i < n; ++i) {
      const AgentSpec& spec = *agents[i];
      others.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) others.push_back(regions[j]);
      }
      disjoint[i] = disjointness(regions[i], others).holds;

      const Path2d& path = spec.paths[spec.active_path];
      const double horizon =
          std::max(path.length(), regions[i].members[spec.active_path].span_end);
      gaps[i] = gap_to_region(states[i], path,
                              spec.radius + safety[i].inflation_margin, others,
                              horizon);

      const ConstraintSet bounds =
          tightened_bounds(states[i], gaps[i], spec.strategy, spec.model);
      LookaheadContext ctx;
      ctx.paths = spec.paths;
      ctx.active_path = spec.active_path;
      ctx.agent_id = spec.id;
      ctx.safety = safety[i];
      ctx.radius = spec.radius;
      ctx.closed_end = spec.closed_end;
      ctx.others = others;
      ctx.dt = config.dt;
      ctx.gap = gaps[i];
      ctx.hold_remaining = hold[i];
      decided[i] = select_command(
          states[i], guidance_accel(spec.guidance, states[i], spec.model,
                                    config.dt),
          bounds, ctx);
    }

    const double t = static_cast<double>(k) * config.dt;
    std::vector<Body> bodies(n);
    for (std::size_t i = 0; i < n; ++i) {
      const AgentSpec& spec = *agents[i];
      const Command& cmd = decided[i];
      if (cmd.lookahead_failed) {
        hold[i] = spec.strategy.release_hold_ticks;
      } else if (hold[i] > 0) {
        --hold[i];
      }

      const double request =
          plant_request(cmd.a_cmd, safety[i].contingency_decel_mag, spec.plant);
      AgentStated next = step_plant(states[i], request, config.dt, spec.plant);
      const Path2d& path = spec.paths[spec.active_path];
      if (next.s >= path.length()) {
        next.s = path.length();
        next.v = 0.0;
      }
      next.t = t;
      states[i] = next;
      commands[i].push_back(cmd);

      log.records.push_back({t, spec.id, next.s, next.v, cmd.a_cmd,
                             next.a_applied, cmd.contingency_active,
                             cmd.bounds_used.a_hi, gaps[i], disjoint[i]});
      bodies[i] = {spec.id, point_at_arclength(path, next.s), spec.radius};
    }
    log.ticks_run = k;

    auto hits = collision_check(bodies, t);
    if (!hits.empty()) {
      log.collisions = std::move(hits);
      log.terminated_by_collision = true;
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (auto report = first_dance(commands[i], config.dt, 6, 10.0)) {
      log.dances.push_back({agents[i]->id, *report});
    }
  }
  return log;
}

}  // namespace sdsim
