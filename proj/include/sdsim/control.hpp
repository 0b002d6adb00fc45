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

/// Per-agent control layer: strategy-dependent acceleration bounds,
/// contingency invocation from a one-tick lookahead, and detection of
/// oscillating contingency toggling.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "sdsim/dynamics.hpp"
#include "sdsim/geom.hpp"
#include "sdsim/safety.hpp"

namespace sdsim {

inline constexpr double kUnboundedGap = std::numeric_limits<double>::infinity();

struct ConstraintSet {
  double a_lo = 0.0;
  double a_hi = 0.0;

  double clamp(double a) const;
  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

enum class StrategyKind { Tightening, Conservative, None };

std::string_view to_string(StrategyKind kind);
/// Accepts "tightening", "conservative", "none" (case-insensitive).
std::optional<StrategyKind> parse_strategy_kind(std::string_view text);

struct Strategy {
  StrategyKind kind = StrategyKind::None;
  double beta = 1.0;     ///< tightening margin scale (dimensionless)
  double epsilon = 1.0;  ///< tightening regularizer [m]
  double conservative_fraction = 0.8;
  /// Extra ticks a contingency is held after the lookahead passes again.
  /// Zero means greedy release.
  int release_hold_ticks = 0;

  static Strategy tightening(double beta = 1.0, double epsilon = 1.0);
  static Strategy conservative(double fraction = 0.8);
  static Strategy none();

  /// Fraction of peak braking the agent's model plans with.
  double brake_fraction(const ModelParamsd& model) const;
  /// Deceleration magnitude of the model contingency for this strategy.
  double contingency_decel(const ModelParamsd& model) const;
};

struct Command {
  double a_cmd = 0.0;
  bool contingency_active = false;
  ConstraintSet bounds_used;
  /// Free gap minus the stopping distance required at the current speed.
  double margin = 0.0;
  /// True when the lookahead itself failed (as opposed to a held release).
  bool lookahead_failed = false;
};

struct DanceReport {
  int toggle_count = 0;
  bool dance_detected = false;
  double t0 = 0.0;
  double t1 = 0.0;
};

/// Free arclength the ego disc of `footprint_radius` (already inflated) can
/// sweep along `path` from its current position before overlapping any
/// member of `others`. Beyond the path end the final segment is extended
/// up to `horizon`. Returns kUnboundedGap when nothing is hit.
double gap_to_region(const AgentStated& ego, const Path2d& path,
                     double footprint_radius,
                     std::span<const StoppingRegion> others, double horizon);

/// Interpolation weight of the tightening law, in [0, 1].
double tightening_weight(double v, double g, const Strategy& strategy,
                         const ModelParamsd& model);

ConstraintSet tightened_bounds(const AgentStated& ego, double g,
                               const Strategy& strategy,
                               const ModelParamsd& model);

/// Everything the one-tick lookahead needs besides the ego state.
struct LookaheadContext {
  std::span<const Path2d> paths;
  std::size_t active_path = 0;
  AgentId agent_id;
  SafetyParams safety;
  double radius = 1.0;
  bool closed_end = false;
  std::span<const StoppingRegion> others;
  double dt = 0.05;
  double gap = kUnboundedGap;
  /// Remaining hold ticks from a previous contingency.
  int hold_remaining = 0;
};

/// Clamps guidance into `bounds`, predicts one model tick, and overrides
/// with the model contingency when the active path's stopping path at the
/// predicted state would no longer be disjoint from the other regions.
Command select_command(const AgentStated& ego, double guidance_accel,
                       const ConstraintSet& bounds,
                       const LookaheadContext& context);

/// Number of contingency flag transitions (either direction).
int count_toggles(std::span<const Command> commands);

/// `commands` is the window, sampled every `dt` starting at `t0`. The
/// window must cover at least `window_s`; throws std::invalid_argument
/// otherwise.
DanceReport detect_dance(std::span<const Command> commands, double t0,
                         double dt, int toggle_threshold = 6,
                         double window_s = 10.0);

}  // namespace sdsim
