// Copyright 2026 The failsafe-nmpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "failsafe/config_io.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "json.hpp"

namespace failsafe
{
namespace
{

using nlohmann::json;

std::string join(const std::vector<std::string> & lines)
{
  std::string out;
  for (const auto & l : lines) {
    if (!out.empty()) {
      out += "; ";
    }
    out += l;
  }
  return out;
}

// Typed, path-tracking view over one JSON object.
class Reader
{
public:
  Reader(const json * node, std::string path, std::vector<std::string> & diag)
  : node_(node), path_(std::move(path)), diag_(diag)
  {
    if (node_ != nullptr && !node_->is_object()) {
      diag_.push_back(path_ + ": expected an object");
      node_ = nullptr;
    }
  }

  Reader section(const char * key)
  {
    seen_.insert(key);
    const json * child = nullptr;
    if (node_ != nullptr && node_->contains(key)) {
      child = &node_->at(key);
    }
    return Reader(child, field(key), diag_);
  }

  void read(const char * key, double & out) { read_as(key, out, &json::is_number); }
  void read(const char * key, bool & out) { read_as(key, out, &json::is_boolean); }
  void read(const char * key, std::string & out) { read_as(key, out, &json::is_string); }
  void read(const char * key, int & out) { read_as(key, out, &json::is_number_integer); }
  void read(const char * key, std::uint64_t & out)
  {
    read_as(key, out, &json::is_number_unsigned);
  }

  void reject_unknown()
  {
    if (node_ == nullptr) {
      return;
    }
    for (const auto & [key, value] : node_->items()) {
      if (seen_.count(key) == 0) {
        diag_.push_back(field(key.c_str()) + ": unknown field");
      }
    }
  }

  std::string field(const char * key) const
  {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

private:
  template <typename T>
  void read_as(const char * key, T & out, bool (json::*is_type)() const noexcept)
  {
    seen_.insert(key);
    if (node_ == nullptr || !node_->contains(key)) {
      return;
    }
    const json & v = node_->at(key);
    if (!(v.*is_type)()) {
      diag_.push_back(field(key) + ": wrong type");
      return;
    }
    out = v.get<T>();
  }

  const json * node_;
  std::string path_;
  std::vector<std::string> & diag_;
  std::set<std::string> seen_;
};

void read_fault(Reader r, FaultVector & f)
{
  r.read("f1", f.f1);
  r.read("f2", f.f2);
  r.reject_unknown();
}

void read_gains(Reader r, PdGains & g)
{
  r.read("k_p", g.k_p);
  r.read("k_d", g.k_d);
  r.reject_unknown();
}

json fault_json(const FaultVector & f) { return {{"f1", f.f1}, {"f2", f.f2}}; }
json gains_json(const PdGains & g) { return {{"k_p", g.k_p}, {"k_d", g.k_d}}; }

ScenarioConfig parse_document(const json & doc, std::vector<std::string> & diag)
{
  ScenarioConfig c;
  Reader root(&doc, "", diag);

  {
    Reader s = root.section("scenario");
    s.read("name", c.name);
    s.read("initial_speed", c.initial_speed);
    std::string strategy = std::string(to_string(c.strategy));
    s.read("strategy", strategy);
    if (strategy == "BIL") {
      c.strategy = BrakingStrategy::kBrakeInLane;
    } else if (strategy == "BOL") {
      c.strategy = BrakingStrategy::kBrakeOutOfLane;
    } else {
      diag.push_back("scenario.strategy: must be \"BIL\" or \"BOL\"");
    }
    read_fault(s.section("plant_fault"), c.plant_fault);
    s.read("reconfigure", c.reconfigure);
    s.read("inject_fault", c.inject_fault);
    s.read("injection_time", c.injection_time);
    s.read("duration", c.duration);
    s.read("dt", c.dt);
    s.read("plant_substeps", c.plant_substeps);
    s.read("lane_change_duration", c.lane_change_duration);
    s.read("seed", c.seed);
    s.reject_unknown();
  }
  {
    Reader v = root.section("vehicle");
    v.read("c_alpha_f", c.vehicle.c_alpha_f);
    v.read("c_alpha_r", c.vehicle.c_alpha_r);
    v.read("l_f", c.vehicle.l_f);
    v.read("l_r", c.vehicle.l_r);
    v.read("mass", c.vehicle.mass);
    v.read("i_z", c.vehicle.i_z);
    v.reject_unknown();
  }
  {
    Reader a = root.section("actuation");
    a.read("tau", c.actuation_tau);
    a.reject_unknown();
  }
  {
    Reader a = root.section("acc");
    a.read("h_dg", c.acc.h_dg);
    a.read("v_ref", c.acc.v_ref);
    a.read("a_cmd_min", c.acc.a_cmd_min);
    a.read("a_cmd_max", c.acc.a_cmd_max);
    a.read("derivative_filter_tau", c.acc.derivative_filter_tau);
    read_gains(a.section("lead_gains"), c.acc.lead_gains);
    read_gains(a.section("follower_gains"), c.acc.follower_gains);
    a.reject_unknown();
  }
  {
    Reader l = root.section("lane");
    l.read("lane_width", c.lane.lane_width);
    l.read("vehicle_width", c.lane.vehicle_width);
    l.read("shoulder_offset", c.lane.shoulder_offset);
    l.reject_unknown();
  }
  {
    Reader o = root.section("ocp");
    o.read("horizon", c.ocp.horizon);
    o.read("control_horizon", c.ocp.control_horizon);
    o.read("dt", c.ocp.dt);
    {
      Reader w = o.section("weights");
      w.read("w_v_x", c.ocp.weights.w_v_x);
      w.read("w_d_y", c.ocp.weights.w_d_y);
      w.read("w_theta", c.ocp.weights.w_theta);
      w.read("w_a_x", c.ocp.weights.w_a_x);
      w.read("w_delta", c.ocp.weights.w_delta);
      w.reject_unknown();
    }
    {
      Reader b = o.section("bounds");
      auto & bb = c.ocp.bounds;
      b.read("delta_max", bb.delta_max);
      b.read("delta_rate_max", bb.delta_rate_max);
      b.read("a_x_min", bb.a_x_min);
      b.read("a_x_max", bb.a_x_max);
      b.read("a_x_c_min", bb.a_x_c_min);
      b.read("a_x_c_max", bb.a_x_c_max);
      b.read("a_x_c_rate_min", bb.a_x_c_rate_min);
      b.read("a_x_c_rate_max", bb.a_x_c_rate_max);
      b.read("v_x_min", bb.v_x_min);
      b.read("v_x_max", bb.v_x_max);
      b.read("a_y_max", bb.a_y_max);
      b.reject_unknown();
    }
    read_fault(o.section("fault_assumed"), c.ocp.fault_assumed);
    o.read("slack_weight", c.ocp.slack_weight);
    o.read("model_v_x_guard", c.ocp.model_v_x_guard);
    o.read("max_iterations", c.ocp.max_iterations);
    o.read("kkt_tolerance", c.ocp.kkt_tolerance);
    o.read("gap_tolerance", c.ocp.gap_tolerance);
    o.read("slack_tolerance", c.ocp.slack_tolerance);
    o.reject_unknown();
  }
  root.reject_unknown();

  // The prediction model shares the plant's nominal parameters.
  c.ocp.vehicle = c.vehicle;
  c.ocp.actuation_tau = c.actuation_tau;
  return c;
}

json parse_json(const std::string & text)
{
  try {
    return json::parse(text);
  } catch (const json::parse_error & e) {
    throw ConfigError({std::string("parse error: ") + e.what()});
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
: std::runtime_error("invalid config: " + join(diagnostics)), diagnostics_(std::move(diagnostics))
{
}

std::string dump_config(const ScenarioConfig & c)
{
  const auto & b = c.ocp.bounds;
  const auto & w = c.ocp.weights;
  json doc;
  doc["scenario"] = {
    {"name", c.name},
    {"initial_speed", c.initial_speed},
    {"strategy", std::string(to_string(c.strategy))},
    {"plant_fault", fault_json(c.plant_fault)},
    {"reconfigure", c.reconfigure},
    {"inject_fault", c.inject_fault},
    {"injection_time", c.injection_time},
    {"duration", c.duration},
    {"dt", c.dt},
    {"plant_substeps", c.plant_substeps},
    {"lane_change_duration", c.lane_change_duration},
    {"seed", c.seed}};
  doc["vehicle"] = {
    {"c_alpha_f", c.vehicle.c_alpha_f}, {"c_alpha_r", c.vehicle.c_alpha_r},
    {"l_f", c.vehicle.l_f},             {"l_r", c.vehicle.l_r},
    {"mass", c.vehicle.mass},           {"i_z", c.vehicle.i_z}};
  doc["actuation"] = {{"tau", c.actuation_tau}};
  doc["acc"] = {
    {"h_dg", c.acc.h_dg},
    {"v_ref", c.acc.v_ref},
    {"a_cmd_min", c.acc.a_cmd_min},
    {"a_cmd_max", c.acc.a_cmd_max},
    {"derivative_filter_tau", c.acc.derivative_filter_tau},
    {"lead_gains", gains_json(c.acc.lead_gains)},
    {"follower_gains", gains_json(c.acc.follower_gains)}};
  doc["lane"] = {
    {"lane_width", c.lane.lane_width},
    {"vehicle_width", c.lane.vehicle_width},
    {"shoulder_offset", c.lane.shoulder_offset}};
  doc["ocp"] = {
    {"horizon", c.ocp.horizon},
    {"control_horizon", c.ocp.control_horizon},
    {"dt", c.ocp.dt},
    {"weights",
     {{"w_v_x", w.w_v_x},
      {"w_d_y", w.w_d_y},
      {"w_theta", w.w_theta},
      {"w_a_x", w.w_a_x},
      {"w_delta", w.w_delta}}},
    {"bounds",
     {{"delta_max", b.delta_max},
      {"delta_rate_max", b.delta_rate_max},
      {"a_x_min", b.a_x_min},
      {"a_x_max", b.a_x_max},
      {"a_x_c_min", b.a_x_c_min},
      {"a_x_c_max", b.a_x_c_max},
      {"a_x_c_rate_min", b.a_x_c_rate_min},
      {"a_x_c_rate_max", b.a_x_c_rate_max},
      {"v_x_min", b.v_x_min},
      {"v_x_max", b.v_x_max},
      {"a_y_max", b.a_y_max}}},
    {"fault_assumed", fault_json(c.ocp.fault_assumed)},
    {"slack_weight", c.ocp.slack_weight},
    {"model_v_x_guard", c.ocp.model_v_x_guard},
    {"max_iterations", c.ocp.max_iterations},
    {"kkt_tolerance", c.ocp.kkt_tolerance},
    {"gap_tolerance", c.ocp.gap_tolerance},
    {"slack_tolerance", c.ocp.slack_tolerance}};
  return doc.dump(2) + "\n";
}

ScenarioConfig parse_config(const std::string & text)
{
  const json doc = parse_json(text);
  std::vector<std::string> diag;
  ScenarioConfig c = parse_document(doc, diag);
  if (!diag.empty()) {
    throw ConfigError(std::move(diag));
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError({path.string() + ": cannot open"});
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<std::string> validate_config_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    return {path.string() + ": cannot open"};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = parse_json(buf.str());
  } catch (const ConfigError & e) {
    return e.diagnostics();
  }
  std::vector<std::string> diag;
  const ScenarioConfig c = parse_document(doc, diag);
  for (auto & d : validate_scenario(c, true)) {
    diag.push_back(std::move(d));
  }
  return diag;
}

}  // namespace failsafe
