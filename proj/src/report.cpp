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

#include "sdsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sdsim/scenario_io.hpp"

namespace sdsim {

using nlohmann::json;

namespace {

constexpr double kDanceWindow = 10.0;
constexpr int kDanceThreshold = 6;

const AgentSpec& find_agent(const ScenarioConfig& config, const AgentId& id) {
  for (const auto& a : config.agents) {
    if (a.id == id) return a;
  }
  throw std::invalid_argument("unknown agent '" + id + "'");
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_double(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double x = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad number: " + text);
  return x;
}

int strategy_rank(const std::string& label) {
  if (const auto kind = parse_strategy_kind(label)) {
    return static_cast<int>(*kind);
  }
  return 3;
}

json number_or_null(std::optional<double> x) {
  return x ? json(*x) : json(nullptr);
}

}  // namespace

SpeedProfile speed_profile(const TrialLog& log, const AgentId& agent_id) {
  const AgentSpec& spec = find_agent(log.config, agent_id);
  SpeedProfile profile;
  profile.agent_id = agent_id;
  profile.strategy = std::string(to_string(spec.strategy.kind));
  for (const auto& r : log.records) {
    if (r.agent_id == agent_id) profile.samples.push_back({r.s, r.v});
  }
  return profile;
}

double speed_at(const SpeedProfile& profile, double s) {
  const auto& p = profile.samples;
  if (p.empty()) return 0.0;
  if (s <= p.front().s) return p.front().v;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i].s >= s) {
      const double ds = p[i].s - p[i - 1].s;
      if (ds <= 0.0) return p[i].v;
      return p[i - 1].v + (p[i].v - p[i - 1].v) * (s - p[i - 1].s) / ds;
    }
  }
  return 0.0;
}

double mean_speed(const SpeedProfile& profile, double s_begin, double s_end) {
  const auto& p = profile.samples;
  double area = 0.0;
  double covered = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    double a = p[i - 1].s;
    double b = p[i].s;
    if (b <= a || b <= s_begin || a >= s_end) continue;
    double va = p[i - 1].v;
    double vb = p[i].v;
    const double slope = (vb - va) / (b - a);
    if (a < s_begin) {
      va += slope * (s_begin - a);
      a = s_begin;
    }
    if (b > s_end) {
      vb -= slope * (b - s_end);
      b = s_end;
    }
    area += 0.5 * (va + vb) * (b - a);
    covered += b - a;
  }
  return covered > 0.0 ? area / covered : 0.0;
}

AgentId primary_agent(const ScenarioConfig& config) {
  for (const auto& a : config.agents) {
    if (a.guidance.kind != GuidanceKind::Stationary) return a.id;
  }
  if (config.agents.empty()) throw std::invalid_argument("no agents");
  return config.agents.front().id;
}

std::vector<Command> contingency_commands(const TrialLog& log,
                                          const AgentId& agent_id) {
  std::vector<Command> out;
  for (const auto& r : log.records) {
    if (r.agent_id != agent_id) continue;
    Command c;
    c.a_cmd = r.a_cmd;
    c.contingency_active = r.contingency;
    c.bounds_used.a_hi = r.a_hi_eff;
    out.push_back(c);
  }
  return out;
}

double trial_end_time(const TrialLog& log, const AgentId& agent_id) {
  const auto records = log.records_for(agent_id);
  if (records.empty()) return 0.0;
  if (log.terminated_by_collision) return records.back().t;
  std::size_t i = records.size();
  while (i > 0 && records[i - 1].v == 0.0) --i;
  if (i == records.size()) return records.back().t;
  return records[i].t;
}

TrialSummary summarize(const TrialLog& log) {
  return summarize(log, primary_agent(log.config));
}

TrialSummary summarize(const TrialLog& log, const AgentId& agent_id) {
  const AgentSpec& ego = find_agent(log.config, agent_id);
  TrialSummary out;
  out.agent_id = agent_id;
  out.strategy = std::string(to_string(ego.strategy.kind));
  out.collided = !log.collisions.empty();

  // Physical clearance needs positions of every agent at each tick.
  std::map<AgentId, const AgentSpec*> specs;
  for (const auto& a : log.config.agents) specs[a.id] = &a;
  out.min_gap = std::numeric_limits<double>::infinity();
  std::map<AgentId, Point2d> centers;
  double tick_t = std::numeric_limits<double>::quiet_NaN();
  auto flush = [&]() {
    const auto self = centers.find(agent_id);
    if (self == centers.end()) return;
    for (const auto& [id, c] : centers) {
      if (id == agent_id) continue;
      const double gap =
          (self->second - c).norm() - ego.radius - specs.at(id)->radius;
      out.min_gap = std::min(out.min_gap, gap);
    }
  };
  for (const auto& r : log.records) {
    if (r.t != tick_t) {
      flush();
      centers.clear();
      tick_t = r.t;
    }
    const AgentSpec& spec = *specs.at(r.agent_id);
    centers[r.agent_id] =
        point_at_arclength(spec.paths[spec.active_path], r.s);
  }
  flush();

  const auto records = log.records_for(agent_id);
  out.final_position = records.empty() ? ego.s0 : records.back().s;

  const auto commands = contingency_commands(log, agent_id);
  out.toggle_count = count_toggles(commands);

  const double t_end = trial_end_time(log, agent_id);
  std::vector<Command> window;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].t >= t_end - kDanceWindow - 1e-9 &&
        records[i].t <= t_end + 1e-9) {
      window.push_back(commands[i]);
    }
  }
  out.final_window_toggles = count_toggles(window);
  out.dance_detected = std::any_of(
      log.dances.begin(), log.dances.end(),
      [&](const DanceEvent& d) { return d.agent_id == agent_id; });

  SpeedProfile profile = speed_profile(log, agent_id);
  profile.samples.insert(profile.samples.begin(), {ego.s0, ego.v0});
  out.mean_speed_0_200 = mean_speed(profile, 0.0, 200.0);

  double decided_at = ego.s0;
  for (const auto& r : records) {
    if (r.contingency) {
      out.first_contingency_position = decided_at;
      break;
    }
    decided_at = r.s;
  }
  return out;
}

ComparisonTable compare(std::span<const TrialSummary> summaries) {
  if (summaries.size() < 2) {
    throw std::invalid_argument("compare: at least two summaries required");
  }
  ComparisonTable table;
  table.rows.assign(summaries.begin(), summaries.end());
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const TrialSummary& a, const TrialSummary& b) {
                     return strategy_rank(a.strategy) <
                            strategy_rank(b.strategy);
                   });
  return table;
}

json ComparisonTable::to_json() const {
  json rows_json = json::array();
  for (const auto& r : rows) rows_json.push_back(summary_to_json(r));
  return json{{"rows", rows_json}};
}

std::string ComparisonTable::to_text() const {
  const std::vector<std::string> header = {
      "strategy", "collided",   "min_gap[m]", "final_s[m]", "toggles",
      "final10s", "dance",      "mean_v[0,200]", "first_contingency[m]"};
  std::vector<std::vector<std::string>> cells;
  auto fixed = [](double x, int digits) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(digits) << x;
    return o.str();
  };
  for (const auto& r : rows) {
    cells.push_back({r.strategy, r.collided ? "yes" : "no",
                     fixed(r.min_gap, 3), fixed(r.final_position, 2),
                     std::to_string(r.toggle_count),
                     std::to_string(r.final_window_toggles),
                     r.dance_detected ? "yes" : "no",
                     fixed(r.mean_speed_0_200, 2),
                     r.first_contingency_position
                         ? fixed(*r.first_contingency_position, 2)
                         : "-"});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << "  ";
      if (c == 0) {
        out << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      } else {
        out << std::right << std::setw(static_cast<int>(width[c])) << row[c];
      }
    }
    out << '\n';
  };
  emit(header);
  for (const auto& row : cells) emit(row);
  return out.str();
}

json summary_to_json(const TrialSummary& s) {
  return json{
      {"agent_id", s.agent_id},
      {"strategy", s.strategy},
      {"collided", s.collided},
      {"min_gap", s.min_gap},
      {"final_position", s.final_position},
      {"toggle_count", s.toggle_count},
      {"final_window_toggles", s.final_window_toggles},
      {"dance_detected", s.dance_detected},
      {"mean_speed_0_200", s.mean_speed_0_200},
      {"first_contingency_position",
       number_or_null(s.first_contingency_position)},
  };
}

TrialSummary summary_from_json(const json& doc) {
  TrialSummary s;
  try {
    s.agent_id = doc.at("agent_id").get<std::string>();
    s.strategy = doc.at("strategy").get<std::string>();
    s.collided = doc.at("collided").get<bool>();
    s.min_gap = doc.at("min_gap").get<double>();
    s.final_position = doc.at("final_position").get<double>();
    s.toggle_count = doc.at("toggle_count").get<int>();
    s.final_window_toggles = doc.at("final_window_toggles").get<int>();
    s.dance_detected = doc.at("dance_detected").get<bool>();
    s.mean_speed_0_200 = doc.at("mean_speed_0_200").get<double>();
    const json& first = doc.at("first_contingency_position");
    if (!first.is_null()) s.first_contingency_position = first.get<double>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("summary: ") + e.what());
  }
  return s;
}

void write_csv(const TrialLog& log, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : log.records) {
    out << format_double(r.t) << ',' << r.agent_id << ',' << format_double(r.s)
        << ',' << format_double(r.v) << ',' << format_double(r.a_cmd) << ','
        << format_double(r.a_applied) << ',' << (r.contingency ? 1 : 0) << ','
        << format_double(r.a_hi_eff) << ',' << format_double(r.gap) << ','
        << (r.disjoint ? 1 : 0) << '\n';
  }
}

std::vector<TickRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("csv: unexpected header");
  }
  std::vector<TickRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10) {
      throw std::invalid_argument("csv: line " + std::to_string(line_no) +
                                  " has " + std::to_string(f.size()) +
                                  " fields");
    }
    TickRecord r;
    r.t = parse_double(f[0]);
    r.agent_id = f[1];
    r.s = parse_double(f[2]);
    r.v = parse_double(f[3]);
    r.a_cmd = parse_double(f[4]);
    r.a_applied = parse_double(f[5]);
    r.contingency = f[6] == "1";
    r.a_hi_eff = parse_double(f[7]);
    r.gap = parse_double(f[8]);
    r.disjoint = f[9] == "1";
    records.push_back(std::move(r));
  }
  return records;
}

json trial_to_json(const TrialLog& log) {
  json collisions = json::array();
  for (const auto& c : log.collisions) {
    collisions.push_back({{"t", c.t},
                          {"agent_a", c.agent_a},
                          {"agent_b", c.agent_b},
                          {"penetration", c.penetration}});
  }
  json dances = json::array();
  for (const auto& d : log.dances) {
    dances.push_back({{"agent_id", d.agent_id},
                      {"toggle_count", d.report.toggle_count},
                      {"dance_detected", d.report.dance_detected},
                      {"t0", d.report.t0},
                      {"t1", d.report.t1}});
  }
  return json{
      {"config", scenario_to_json(log.config)},
      {"ticks_run", log.ticks_run},
      {"terminated_by_collision", log.terminated_by_collision},
      {"collisions", collisions},
      {"dances", dances},
  };
}

void export_trial(const TrialLog& log, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "log.csv", std::ios::binary);
    write_csv(log, csv);
  }
  std::ofstream meta(dir / "trial.json", std::ios::binary);
  meta << trial_to_json(log).dump(2) << '\n';
}

TrialLog import_trial(const std::filesystem::path& dir) {
  std::ifstream meta_in(dir / "trial.json");
  if (!meta_in) throw std::invalid_argument("cannot open trial.json");
  const json meta = json::parse(meta_in);

  TrialLog log;
  log.config = scenario_from_json(meta.at("config"));
  log.ticks_run = meta.at("ticks_run").get<std::size_t>();
  log.terminated_by_collision = meta.at("terminated_by_collision").get<bool>();
  for (const auto& c : meta.at("collisions")) {
    log.collisions.push_back({c.at("t").get<double>(),
                              c.at("agent_a").get<std::string>(),
                              c.at("agent_b").get<std::string>(),
                              c.at("penetration").get<double>()});
  }
  for (const auto& d : meta.at("dances")) {
    DanceReport report;
    report.toggle_count = d.at("toggle_count").get<int>();
    report.dance_detected = d.at("dance_detected").get<bool>();
    report.t0 = d.at("t0").get<double>();
    report.t1 = d.at("t1").get<double>();
    log.dances.push_back({d.at("agent_id").get<std::string>(), report});
  }

  std::ifstream csv(dir / "log.csv");
  if (!csv) throw std::invalid_argument("cannot open log.csv");
  log.records = read_csv(csv);
  return log;
}

}  // namespace sdsim
