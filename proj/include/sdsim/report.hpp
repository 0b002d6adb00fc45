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

/// Post-processing of trial logs: speed profiles, per-trial summaries,
/// strategy comparison tables, and the on-disk telemetry formats.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdsim/sim.hpp"

namespace sdsim {

/// Exact CSV header of the per-tick telemetry.
inline constexpr const char* kCsvHeader =
    "t,agent_id,s,v,a_cmd,a_applied,contingency,a_hi_eff,gap,disjoint";

struct ProfileSample {
  double s = 0.0;
  double v = 0.0;

  friend bool operator==(const ProfileSample&, const ProfileSample&) = default;
};

struct SpeedProfile {
  AgentId agent_id;
  std::string strategy;
  std::vector<ProfileSample> samples;

  friend bool operator==(const SpeedProfile&, const SpeedProfile&) = default;
};

/// One sample per logged tick, in tick order. Throws std::invalid_argument
/// for an agent that is not in the log.
SpeedProfile speed_profile(const TrialLog& log, const AgentId& agent_id);

/// Speed at arclength `s` by linear interpolation over the forward pass of
/// the profile; 0 past the last sample.
double speed_at(const SpeedProfile& profile, double s);

/// Arclength-weighted mean speed over [s_begin, s_end] (trapezoid rule),
/// restricted to the part of the interval the profile covers.
double mean_speed(const SpeedProfile& profile, double s_begin, double s_end);

struct TrialSummary {
  AgentId agent_id;
  std::string strategy;
  bool collided = false;
  /// Smallest physical clearance to any other agent over the trial.
  double min_gap = 0.0;
  double final_position = 0.0;
  /// Contingency toggles over the whole trial.
  int toggle_count = 0;
  /// Toggles in the final 10 s before the final stop or the collision.
  int final_window_toggles = 0;
  bool dance_detected = false;
  double mean_speed_0_200 = 0.0;
  std::optional<double> first_contingency_position;

  friend bool operator==(const TrialSummary&, const TrialSummary&) = default;
};

/// Default agent: the first declared agent whose guidance is not
/// stationary (or the first agent).
AgentId primary_agent(const ScenarioConfig& config);

TrialSummary summarize(const TrialLog& log);
TrialSummary summarize(const TrialLog& log, const AgentId& agent_id);

/// Time at which the agent comes to rest for good, or the collision time,
/// or the end of the log.
double trial_end_time(const TrialLog& log, const AgentId& agent_id);

/// Contingency flags of one agent as commands, for the dance detector.
std::vector<Command> contingency_commands(const TrialLog& log,
                                          const AgentId& agent_id);

struct ComparisonTable {
  /// Ordered tightening, conservative, none; other labels keep input order.
  std::vector<TrialSummary> rows;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Throws std::invalid_argument with fewer than two summaries.
ComparisonTable compare(std::span<const TrialSummary> summaries);

nlohmann::json summary_to_json(const TrialSummary& summary);
TrialSummary summary_from_json(const nlohmann::json& doc);

void write_csv(const TrialLog& log, std::ostream& out);
std::vector<TickRecord> read_csv(std::istream& in);

/// Everything in a TrialLog except the per-tick records.
nlohmann::json trial_to_json(const TrialLog& log);

/// Writes `log.csv` and `trial.json` into `dir` (created if needed).
void export_trial(const TrialLog& log, const std::filesystem::path& dir);
TrialLog import_trial(const std::filesystem::path& dir);

}  // namespace sdsim
