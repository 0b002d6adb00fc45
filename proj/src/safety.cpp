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

#include "sdsim/safety.hpp"

#include <algorithm>
#include <stdexcept>

namespace sdsim {

bool DisjointnessReport::is_safe(std::size_t path_index) const {
  return std::find(safe_path_indices.begin(), safe_path_indices.end(),
                   path_index) != safe_path_indices.end();
}

StoppingPath stopping_path(const AgentStated& state, const Path2d& path,
                           const SafetyParams& params, double radius,
                           std::size_t path_index, const AgentId& agent_id,
                           bool closed_end) {
  StoppingPath out;
  out.agent_id = agent_id;
  out.path_index = path_index;
  out.d_stop = stopping_distance(state.v, params.contingency_decel_mag);
  out.span_begin = state.s;
  out.span_end = state.s + out.d_stop;

  const double r = radius + params.inflation_margin;
  if (closed_end && out.span_end > path.length()) {
    out.overruns_closed_end = true;
    out.span_end = path.length();
  }
  out.footprint = sweep_extended(path, out.span_begin, out.span_end, r);
  return out;
}

StoppingRegion stopping_region(const AgentStated& state,
                               std::span<const Path2d> paths,
                               const SafetyParams& params, double radius,
                               const AgentId& agent_id, bool closed_end) {
  if (paths.empty()) {
    throw std::domain_error("stopping_region: empty path set");
  }
  StoppingRegion region;
  region.agent_id = agent_id;
  region.members.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    region.members.push_back(stopping_path(state, paths[i], params, radius, i,
                                           agent_id, closed_end));
  }
  return region;
}

DisjointnessReport disjointness(const StoppingRegion& ego,
                                std::span<const StoppingRegion> others) {
  DisjointnessReport report;
  for (const auto& mine : ego.members) {
    bool clear = true;
    if (mine.overruns_closed_end) {
      clear = false;
      report.blocking_pairs.push_back({kPathEndId, mine.path_index});
    }
    for (const auto& other : others) {
      for (const auto& theirs : other.members) {
        if (!chains_disjoint(mine.footprint, theirs.footprint)) {
          clear = false;
          report.blocking_pairs.push_back({other.agent_id, mine.path_index});
          break;
        }
      }
    }
    if (clear) report.safe_path_indices.push_back(mine.path_index);
  }
  report.holds = !report.safe_path_indices.empty();
  return report;
}

}  // namespace sdsim
