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

#include "sdsim/scenario_io.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace sdsim {

using nlohmann::json;

namespace {

// Strict view over one JSON object: every read is recorded so that
// leftover keys can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string where)
      : node_(node), where_(std::move(where)) {
    if (!node_.is_object()) fail(where_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& field,
                                const std::string& message) {
    throw ValidationError(field.empty() ? "<root>" : field, message);
  }

  std::string field(const std::string& key) const {
    return where_.empty() ? key : where_ + "." + key;
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!node_.contains(key)) fail(field(key), "missing required key");
    return node_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) fail(field(key), "expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  long long integer(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_integer()) fail(field(key), "expected an integer");
    return v.get<long long>();
  }

  bool boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) fail(field(key), "expected a boolean");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) fail(field(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) fail(field(item.key()), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string where_;
  std::set<std::string> seen_;
};

std::string indexed(const std::string& base, std::size_t i) {
  std::ostringstream out;
  out << base << "[" << i << "]";
  return out.str();
}

Path2d read_path(const json& node, const std::string& where) {
  if (!node.is_array() || node.empty()) {
    ObjectReader::fail(where, "expected a non-empty array of [x, y] points");
  }
  std::vector<Point2d> vertices;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const json& p = node[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
        !p[1].is_number()) {
      ObjectReader::fail(indexed(where, i), "expected [x, y]");
    }
    vertices.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  try {
    return Path2d(std::move(vertices));
  } catch (const std::invalid_argument& e) {
    ObjectReader::fail(where, e.what());
  }
}

AgentSpec read_agent(const json& node, const std::string& where) {
  ObjectReader r(node, where);
  AgentSpec a;
  a.id = r.string("id");

  const json& paths = r.at("paths");
  if (!paths.is_array() || paths.empty()) {
    ObjectReader::fail(r.field("paths"), "expected a non-empty array");
  }
  for (std::size_t i = 0; i < paths.size(); ++i) {
    a.paths.push_back(read_path(paths[i], indexed(r.field("paths"), i)));
  }
  if (r.has("active_path")) {
    const long long idx = r.integer("active_path");
    if (idx < 0) ObjectReader::fail(r.field("active_path"), "must be >= 0");
    a.active_path = static_cast<std::size_t>(idx);
  }
  a.closed_end = r.boolean_or("closed_end", false);
  a.s0 = r.number("s0");
  a.v0 = r.number("v0");
  a.radius = r.number("radius");

  {
    ObjectReader m(r.at("model"), r.field("model"));
    a.model.a_max = m.number("a_max");
    a.model.a_brake_peak = m.number("a_brake_peak");
    a.model.brake_fraction = m.number("brake_fraction");
    a.model.v_max = m.number_or("v_max", a.model.v_max);
    m.finish();
  }
  {
    ObjectReader p(r.at("plant"), r.field("plant"));
    a.plant.actuation_lag_tau = p.number("actuation_lag_tau");
    a.plant.a_brake_peak = p.number("a_brake_peak");
    p.finish();
  }
  {
    ObjectReader s(r.at("safety"), r.field("safety"));
    a.inflation_margin = s.number("inflation_margin");
    s.finish();
  }
  {
    ObjectReader s(r.at("strategy"), r.field("strategy"));
    const std::string kind = s.string("kind");
    const auto parsed = parse_strategy_kind(kind);
    if (!parsed) {
      ObjectReader::fail(s.field("kind"), "unknown strategy '" + kind + "'");
    }
    a.strategy.kind = *parsed;
    a.strategy.beta = s.number_or("beta", a.strategy.beta);
    a.strategy.epsilon = s.number_or("epsilon", a.strategy.epsilon);
    a.strategy.conservative_fraction =
        s.number_or("conservative_fraction", a.strategy.conservative_fraction);
    if (s.has("release_hold_ticks")) {
      a.strategy.release_hold_ticks =
          static_cast<int>(s.integer("release_hold_ticks"));
    }
    s.finish();
  }
  {
    ObjectReader g(r.at("guidance"), r.field("guidance"));
    const std::string kind = g.string("kind");
    if (kind == "full_throttle") {
      a.guidance.kind = GuidanceKind::FullThrottle;
    } else if (kind == "stationary") {
      a.guidance.kind = GuidanceKind::Stationary;
    } else if (kind == "cruise_to") {
      a.guidance.kind = GuidanceKind::CruiseTo;
      a.guidance.target_speed = g.number("target_speed");
      a.guidance.gain = g.number_or("gain", a.guidance.gain);
    } else {
      ObjectReader::fail(g.field("kind"), "unknown guidance '" + kind + "'");
    }
    g.finish();
  }
  r.finish();
  return a;
}

}  // namespace

ScenarioConfig scenario_from_json(const json& doc) {
  ObjectReader r(doc, "");
  ScenarioConfig config;
  config.dt = r.number("dt");
  config.duration = r.number("duration");

  const json& agents = r.at("agents");
  if (!agents.is_array()) ObjectReader::fail("agents", "expected an array");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    config.agents.push_back(read_agent(agents[i], indexed("agents", i)));
  }
  if (r.has("metadata")) {
    const json& meta = r.at("metadata");
    if (!meta.is_object()) ObjectReader::fail("metadata", "expected an object");
    for (const auto& item : meta.items()) {
      if (!item.value().is_string()) {
        ObjectReader::fail("metadata." + item.key(), "expected a string");
      }
      config.metadata[item.key()] = item.value().get<std::string>();
    }
  }
  r.finish();
  validate(config);
  return config;
}

ScenarioConfig parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("<document>", e.what());
  }
  return scenario_from_json(doc);
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("<file>", "cannot open " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

json scenario_to_json(const ScenarioConfig& config) {
  json doc;
  doc["dt"] = config.dt;
  doc["duration"] = config.duration;
  doc["metadata"] = json::object();
  for (const auto& [k, v] : config.metadata) doc["metadata"][k] = v;

  json agents = json::array();
  for (const auto& a : config.agents) {
    json paths = json::array();
    for (const auto& p : a.paths) {
      json vertices = json::array();
      for (const auto& v : p.vertices()) vertices.push_back({v.x(), v.y()});
      paths.push_back(std::move(vertices));
    }
    json guidance = {{"kind", std::string(to_string(a.guidance.kind))}};
    if (a.guidance.kind == GuidanceKind::CruiseTo) {
      guidance["target_speed"] = a.guidance.target_speed;
      guidance["gain"] = a.guidance.gain;
    }
    agents.push_back({
        {"id", a.id},
        {"paths", std::move(paths)},
        {"active_path", a.active_path},
        {"closed_end", a.closed_end},
        {"s0", a.s0},
        {"v0", a.v0},
        {"radius", a.radius},
        {"model",
         {{"a_max", a.model.a_max},
          {"a_brake_peak", a.model.a_brake_peak},
          {"brake_fraction", a.model.brake_fraction},
          {"v_max", a.model.v_max}}},
        {"plant",
         {{"actuation_lag_tau", a.plant.actuation_lag_tau},
          {"a_brake_peak", a.plant.a_brake_peak}}},
        {"safety", {{"inflation_margin", a.inflation_margin}}},
        {"strategy",
         {{"kind", std::string(to_string(a.strategy.kind))},
          {"beta", a.strategy.beta},
          {"epsilon", a.strategy.epsilon},
          {"conservative_fraction", a.strategy.conservative_fraction},
          {"release_hold_ticks", a.strategy.release_hold_ticks}}},
        {"guidance", std::move(guidance)},
    });
  }
  doc["agents"] = std::move(agents);
  return doc;
}

}  // namespace sdsim
