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

#include "sdsim/control.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace sdsim {

double ConstraintSet::clamp(double a) const {
  return std::clamp(a, a_lo, a_hi);
}

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Tightening:
      return "tightening";
    case StrategyKind::Conservative:
      return "conservative";
    case StrategyKind::None:
      return "none";
  }
  return "unknown";
}

std::optional<StrategyKind> parse_strategy_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "tightening") return StrategyKind::Tightening;
  if (lower == "conservative") return StrategyKind::Conservative;
  if (lower == "none") return StrategyKind::None;
  return std::nullopt;
}

Strategy Strategy::tightening(double beta, double epsilon) {
  Strategy s;
  s.kind = StrategyKind::Tightening;
  s.beta = beta;
  s.epsilon = epsilon;
  return s;
}

Strategy Strategy::conservative(double fraction) {
  Strategy s;
  s.kind = StrategyKind::Conservative;
  s.conservative_fraction = fraction;
  return s;
}

Strategy Strategy::none() { return Strategy{}; }

double Strategy::brake_fraction(const ModelParamsd& model) const {
  return kind == StrategyKind::Conservative ? conservative_fraction
                                            : model.brake_fraction;
}

double Strategy::contingency_decel(const ModelParamsd& model) const {
  return brake_fraction(model) * model.a_brake_peak;
}

double gap_to_region(const AgentStated& ego, const Path2d& path,
                     double footprint_radius,
                     std::span<const StoppingRegion> others, double horizon) {
  double best = kUnboundedGap;
  auto probe = [&](const Point2d& start, const Point2d& dir, double length,
                   double offset) {
    for (const auto& region : others) {
      for (const auto& member : region.members) {
        for (const auto& capsule : member.footprint.capsules) {
          if (const auto t = first_contact(start, dir, length,
                                           footprint_radius, capsule)) {
            best = std::min(best, offset + *t);
          }
        }
      }
    }
  };

  const Point2d here = point_at_arclength(path, ego.s);
  if (path.degenerate() || horizon <= ego.s) {
    probe(here, Point2d::UnitX(), 0.0, 0.0);
    return best;
  }

  const auto& cum = path.cumulative_arclength();
  double s = ego.s;
  for (std::size_t i = path.segment_at(ego.s); i < path.segment_count(); ++i) {
    const bool last = i + 1 == path.segment_count();
    const double seg_end = last ? std::max(horizon, cum[i + 1])
                                : std::min(horizon, cum[i + 1]);
    const double end = std::min(seg_end, horizon);
    if (end > s) {
      probe(point_along_extended(path, s), path.direction(i), end - s,
            s - ego.s);
    }
    s = end;
    if (s >= horizon || best <= s - ego.s) break;
  }
  return best;
}

double tightening_weight(double v, double g, const Strategy& strategy,
                         const ModelParamsd& model) {
  if (std::isinf(g)) return 1.0;
  const double d = stopping_distance(v, strategy.contingency_decel(model));
  const double scale = strategy.beta * d + strategy.epsilon;
  if (!(scale > 0.0)) return g > d ? 1.0 : 0.0;
  return std::clamp((g - d) / scale, 0.0, 1.0);
}

ConstraintSet tightened_bounds(const AgentStated& ego, double g,
                               const Strategy& strategy,
                               const ModelParamsd& model) {
  const double decel = strategy.contingency_decel(model);
  ConstraintSet bounds{-decel, model.a_max};
  if (strategy.kind != StrategyKind::Tightening) return bounds;

  const double lambda = tightening_weight(ego.v, g, strategy, model);
  if (lambda < 1.0) bounds.a_hi = -decel + lambda * (model.a_max + decel);
  return bounds;
}

Command select_command(const AgentStated& ego, double guidance_accel,
                       const ConstraintSet& bounds,
                       const LookaheadContext& context) {
  Command cmd;
  cmd.bounds_used = bounds;
  cmd.a_cmd = bounds.clamp(guidance_accel);

  const Path2d& path = context.paths[context.active_path];
  AgentStated predicted = predict_model(ego, cmd.a_cmd, context.dt);
  predicted.s = std::min(predicted.s, path.length());

  StoppingRegion ahead;
  ahead.agent_id = context.agent_id;
  ahead.members.push_back(stopping_path(predicted, path, context.safety,
                                        context.radius, context.active_path,
                                        context.agent_id, context.closed_end));
  const auto report = disjointness(ahead, context.others);
  cmd.lookahead_failed = !report.is_safe(context.active_path);

  const double d_now =
      stopping_distance(ego.v, context.safety.contingency_decel_mag);
  cmd.margin = context.gap - d_now;

  if (cmd.lookahead_failed || context.hold_remaining > 0) {
    cmd.contingency_active = true;
    cmd.a_cmd = -context.safety.contingency_decel_mag;
  }
  return cmd;
}

int count_toggles(std::span<const Command> commands) {
  int toggles = 0;
  for (std::size_t i = 1; i < commands.size(); ++i) {
    if (commands[i].contingency_active != commands[i - 1].contingency_active) {
      ++toggles;
    }
  }
  return toggles;
}

DanceReport detect_dance(std::span<const Command> commands, double t0,
                         double dt, int toggle_threshold, double window_s) {
  const double covered = static_cast<double>(commands.size()) * dt;
  if (covered + 1e-9 < window_s) {
    throw std::invalid_argument("detect_dance: window shorter than window_s");
  }
  DanceReport report;
  report.toggle_count = count_toggles(commands);
  report.dance_detected = report.toggle_count >= toggle_threshold;
  report.t0 = t0;
  report.t1 = t0 + static_cast<double>(commands.size() - 1) * dt;
  return report;
}

}  // namespace sdsim
