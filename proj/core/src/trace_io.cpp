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

#include "failsafe/trace_io.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace failsafe
{
namespace
{

void write_row(std::ostream & os, const std::vector<std::string> & cells)
{
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) {
      os << ',';
    }
    os << cells[i];
  }
  os << '\n';
}

std::string opt(const std::optional<double> & v)
{
  return v.has_value() ? format_double(*v) : std::string("unset");
}

nlohmann::json opt_json(const std::optional<double> & v)
{
  return v.has_value() ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

double e_tg_target(const StepRecord & s, int slot)
{
  switch (slot) {
    case kFaulty:
      return s.e_tg_fv_lv;
    case kTrailing:
      return s.tv_target == kLead ? s.e_tg_tv_lv : s.e_tg_tv_fv;
    default:
      return std::nan("");
  }
}

double e_tg_lead(const StepRecord & s, int slot)
{
  switch (slot) {
    case kFaulty:
      return s.e_tg_fv_lv;
    case kTrailing:
      return s.e_tg_tv_lv;
    default:
      return std::nan("");
  }
}

}  // namespace

std::string format_double(double value)
{
  if (std::isnan(value)) {
    return "nan";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

const std::vector<std::string> & trace_columns()
{
  static const std::vector<std::string> cols{
    "step",        "t",          "vehicle",     "a_x",          "v_x",
    "v_y",         "d_y",        "r",           "theta",        "d_x",
    "a_x_c",       "delta",      "f1",          "f2",           "e_tg_target",
    "e_tg_lead",   "mode",       "takeover",    "goal_v_x",     "ref_v_x",
    "ref_d_y",     "ref_theta",  "solver_status", "solver_iterations", "kkt_residual",
    "slack",       "a_y_model",  "a_y_plant"};
  return cols;
}

const std::vector<std::string> & plot_columns()
{
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"t"};
    for (int v = 0; v < kNumVehicles; ++v) {
      const std::string p(slot_name(v));
      for (const char * q : {"v_x", "a_x", "a_x_c", "delta", "d_y", "r", "d_x"}) {
        c.push_back(p + "_" + q);
      }
    }
    for (const char * q : {"e_tg_fv_lv", "e_tg_tv_fv", "e_tg_tv_lv", "mode", "a_y_plant"}) {
      c.emplace_back(q);
    }
    return c;
  }();
  return cols;
}

const std::vector<std::string> & metrics_columns()
{
  static const std::vector<std::string> cols{
    "run",          "strategy",      "f1",           "f2",
    "reconfigured", "t_a",           "t_b",          "stop_time",
    "stop_distance", "tv_gap_closing_time", "e_tg_at_t_b", "max_d_y_error",
    "max_r_error",  "max_delta"};
  return cols;
}

void write_trace_csv(std::ostream & os, const SimTrace & trace)
{
  write_row(os, trace_columns());
  for (const auto & s : trace.steps) {
    for (int v = 0; v < kNumVehicles; ++v) {
      const auto & x = s.states[v];
      const auto & u = s.inputs[v];
      const FaultVector f = v == kFaulty ? s.fv_plant_fault : FaultVector::nominal();
      std::vector<std::string> row{
        std::to_string(s.step),      format_double(s.t),   std::string(slot_name(v)),
        format_double(x.a_x),        format_double(x.v_x), format_double(x.v_y),
        format_double(x.d_y),        format_double(x.r),   format_double(x.theta),
        format_double(x.d_x),        format_double(u.a_x_c), format_double(u.delta),
        format_double(f.f1),         format_double(f.f2),  format_double(e_tg_target(s, v)),
        format_double(e_tg_lead(s, v))};
      if (v == kFaulty) {
        const bool solved = s.solver_active;
        row.insert(
          row.end(),
          {std::string(to_string(s.mode)), s.takeover ? "1" : "0", format_double(s.goal_velocity),
           format_double(s.fv_reference.z_v_x), format_double(s.fv_reference.z_d_y),
           format_double(s.fv_reference.z_theta),
           solved ? std::string(to_string(s.solver_status)) : std::string(),
           solved ? std::to_string(s.solver_iterations) : std::string(),
           solved ? format_double(s.kkt_residual) : std::string(),
           solved ? format_double(s.slack) : std::string(), format_double(s.a_y_model),
           format_double(s.a_y_plant)});
      } else {
        row.resize(trace_columns().size());
      }
      write_row(os, row);
    }
  }
}

void write_plot_csv(std::ostream & os, const SimTrace & trace)
{
  write_row(os, plot_columns());
  for (const auto & s : trace.steps) {
    std::vector<std::string> row{format_double(s.t)};
    for (int v = 0; v < kNumVehicles; ++v) {
      const auto & x = s.states[v];
      const auto & u = s.inputs[v];
      for (double q : {x.v_x, x.a_x, u.a_x_c, u.delta, x.d_y, x.r, x.d_x}) {
        row.push_back(format_double(q));
      }
    }
    row.push_back(format_double(s.e_tg_fv_lv));
    row.push_back(format_double(s.e_tg_tv_fv));
    row.push_back(format_double(s.e_tg_tv_lv));
    row.emplace_back(to_string(s.mode));
    row.push_back(format_double(s.a_y_plant));
    write_row(os, row);
  }
}

void write_error_csv(std::ostream & os, const ErrorSeries & e)
{
  write_row(os, {"t", "delta_error", "d_y_error", "r_error"});
  for (std::size_t i = 0; i < e.t.size(); ++i) {
    write_row(
      os, {format_double(e.t[i]), format_double(e.delta[i]), format_double(e.d_y[i]),
           format_double(e.r[i])});
  }
}

void write_metrics_csv(std::ostream & os, const std::vector<NamedReport> & reports)
{
  write_row(os, metrics_columns());
  for (const auto & n : reports) {
    const auto & r = n.report;
    write_row(
      os, {n.config.name, std::string(to_string(n.config.strategy)),
           format_double(n.config.plant_fault.f1), format_double(n.config.plant_fault.f2),
           n.config.reconfigure ? "1" : "0", opt(n.t_a), opt(n.t_b), opt(r.stop_time),
           opt(r.stop_distance), opt(r.tv_gap_closing_time), opt(r.e_tg_at_t_b),
           opt(r.max_d_y_error), opt(r.max_r_error), opt(r.max_delta)});
  }
}

void write_metrics_json(std::ostream & os, const std::vector<NamedReport> & reports)
{
  nlohmann::json runs = nlohmann::json::array();
  for (const auto & n : reports) {
    const auto & r = n.report;
    runs.push_back(
      {{"run", n.config.name},
       {"strategy", std::string(to_string(n.config.strategy))},
       {"f1", n.config.plant_fault.f1},
       {"f2", n.config.plant_fault.f2},
       {"reconfigured", n.config.reconfigure},
       {"t_a", opt_json(n.t_a)},
       {"t_b", opt_json(n.t_b)},
       {"stop_time", opt_json(r.stop_time)},
       {"stop_distance", opt_json(r.stop_distance)},
       {"tv_gap_closing_time", opt_json(r.tv_gap_closing_time)},
       {"e_tg_at_t_b", opt_json(r.e_tg_at_t_b)},
       {"max_d_y_error", opt_json(r.max_d_y_error)},
       {"max_r_error", opt_json(r.max_r_error)},
       {"max_delta", opt_json(r.max_delta)}});
  }
  os << nlohmann::json{{"runs", runs}}.dump(2) << '\n';
}

}  // namespace failsafe
