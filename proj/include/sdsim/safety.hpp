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

/// Stopping paths, stopping regions and the disjointness check between
/// agents.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sdsim/dynamics.hpp"
#include "sdsim/geom.hpp"

namespace sdsim {

using AgentId = std::string;

/// Agent id used in blocking pairs for a stopping path that overruns a
/// closed path end.
inline const AgentId kPathEndId = "<path-end>";

struct SafetyParams {
  double inflation_margin = 0.25;     ///< added to the footprint radius [m]
  double contingency_decel_mag = 7.2; ///< braking the model plans with
};

/// Space an agent sweeps while braking to a stop along one path.
struct StoppingPath {
  AgentId agent_id;
  std::size_t path_index = 0;
  double span_begin = 0.0;
  double span_end = 0.0;
  double d_stop = 0.0;
  bool overruns_closed_end = false;
  CapsuleChain2d footprint;
};

/// One stopping path per followable path, keyed by path_index.
struct StoppingRegion {
  AgentId agent_id;
  std::vector<StoppingPath> members;
};

struct BlockingPair {
  AgentId other_agent_id;
  std::size_t path_index = 0;

  friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

struct DisjointnessReport {
  bool holds = false;
  std::vector<std::size_t> safe_path_indices;
  std::vector<BlockingPair> blocking_pairs;

  bool is_safe(std::size_t path_index) const;
};

/// `radius` is the physical footprint radius; the inflation margin is added
/// here. With `closed_end` the span is clamped to the path end and an
/// overrun marks the path as blocked; otherwise the footprint continues
/// past the end along the final segment.
StoppingPath stopping_path(const AgentStated& state, const Path2d& path,
                           const SafetyParams& params, double radius,
                           std::size_t path_index = 0,
                           const AgentId& agent_id = {},
                           bool closed_end = false);

/// Throws std::domain_error on an empty path set.
StoppingRegion stopping_region(const AgentStated& state,
                               std::span<const Path2d> paths,
                               const SafetyParams& params, double radius,
                               const AgentId& agent_id = {},
                               bool closed_end = false);

DisjointnessReport disjointness(const StoppingRegion& ego,
                                std::span<const StoppingRegion> others);

}  // namespace sdsim
