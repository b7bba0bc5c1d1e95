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

#include "failsafe/scenario.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "failsafe/errors.hpp"

namespace failsafe
{
namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double safe_time_gap_error(const VehicleState & prec, const VehicleState & ego, double h_dg)
{
  if (!(ego.v_x > 0.0) || !(prec.d_x > ego.d_x)) {
    return kNaN;
  }
  return time_gap_error(prec.d_x, ego.d_x, ego.v_x, h_dg);
}

bool is_multiple(double value, double base)
{
  const double ratio = value / base;
  return std::abs(ratio - std::round(ratio)) < 1e-9 && std::round(ratio) >= 1.0;
}

class Diagnostics
{
public:
  void check(bool ok, const std::string & field, const std::string & message)
  {
    if (!ok) {
      errors_.push_back(field + ": " + message);
    }
  }
  std::vector<std::string> take() { return std::move(errors_); }

private:
  std::vector<std::string> errors_;
};

}  // namespace

std::string_view slot_name(int slot)
{
  switch (slot) {
    case kLead:
      return "LV";
    case kFaulty:
      return "FV";
    case kTrailing:
      return "TV";
    default:
      return "?";
  }
}

bool stop_condition(
  const VehicleState & fv, double goal_velocity, double goal_d_y, double v_tolerance,
  double d_y_tolerance)
{
  return std::abs(fv.v_x - goal_velocity) <= v_tolerance &&
         std::abs(fv.d_y - goal_d_y) <= d_y_tolerance;
}

std::vector<std::string> validate_scenario(const ScenarioConfig & c, bool check_duration_margin)
{
  Diagnostics d;
  const auto & v = c.vehicle;
  d.check(v.c_alpha_f > 0.0, "vehicle.c_alpha_f", "must be > 0");
  d.check(v.c_alpha_r > 0.0, "vehicle.c_alpha_r", "must be > 0");
  d.check(v.l_f > 0.0, "vehicle.l_f", "must be > 0");
  d.check(v.l_r > 0.0, "vehicle.l_r", "must be > 0");
  d.check(v.mass > 0.0, "vehicle.mass", "must be > 0");
  d.check(v.i_z > 0.0, "vehicle.i_z", "must be > 0");

  d.check(c.dt > 0.0, "scenario.dt", "must be > 0");
  d.check(c.duration >= 0.0, "scenario.duration", "must be >= 0");
  d.check(c.plant_substeps >= 1, "scenario.plant_substeps", "must be >= 1");
  d.check(c.injection_time >= 0.0, "scenario.injection_time", "must be >= 0");
  d.check(c.lane_change_duration > 0.0, "scenario.lane_change_duration", "must be > 0");
  d.check(
    c.initial_speed >= c.ocp.bounds.v_x_min && c.initial_speed <= c.ocp.bounds.v_x_max,
    "scenario.initial_speed", "must lie within [ocp.bounds.v_x_min, ocp.bounds.v_x_max]");
  d.check(c.plant_fault.f1 > 0.0 && c.plant_fault.f1 <= 1.0, "scenario.plant_fault.f1",
          "must lie in (0, 1]");
  d.check(c.plant_fault.f2 > 0.0 && c.plant_fault.f2 <= 1.0, "scenario.plant_fault.f2",
          "must lie in (0, 1]");
  if (c.dt > 0.0 && c.plant_substeps >= 1) {
    d.check(c.actuation_tau >= c.dt / c.plant_substeps, "actuation.tau",
            "must be >= the plant integration step");
  }

  const auto & a = c.acc;
  d.check(a.h_dg > 0.0, "acc.h_dg", "must be > 0");
  d.check(a.a_cmd_min < a.a_cmd_max, "acc.a_cmd_min", "must be < acc.a_cmd_max");
  d.check(a.derivative_filter_tau >= 0.0, "acc.derivative_filter_tau", "must be >= 0");

  d.check(c.lane.vehicle_width > 0.0, "lane.vehicle_width", "must be > 0");
  d.check(c.lane.lane_width > c.lane.vehicle_width, "lane.lane_width",
          "must exceed lane.vehicle_width");

  const auto & o = c.ocp;
  d.check(o.horizon >= 1, "ocp.horizon", "must be >= 1");
  if (o.horizon >= 1) {
    d.check(o.control_horizon >= 1 && o.control_horizon <= o.horizon, "ocp.control_horizon",
            "must lie in [1, ocp.horizon]");
  }
  d.check(o.dt > 0.0, "ocp.dt", "must be > 0");
  if (o.dt > 0.0 && c.dt > 0.0) {
    d.check(is_multiple(o.dt, c.dt), "ocp.dt", "must be an integer multiple of scenario.dt");
    d.check(c.actuation_tau >= o.dt, "actuation.tau", "must be >= ocp.dt");
  }
  const auto & w = o.weights;
  d.check(w.w_v_x >= 0.0, "ocp.weights.w_v_x", "must be >= 0");
  d.check(w.w_d_y >= 0.0, "ocp.weights.w_d_y", "must be >= 0");
  d.check(w.w_theta >= 0.0, "ocp.weights.w_theta", "must be >= 0");
  d.check(w.w_a_x > 0.0, "ocp.weights.w_a_x", "must be > 0");
  d.check(w.w_delta > 0.0, "ocp.weights.w_delta", "must be > 0");
  const auto & b = o.bounds;
  d.check(b.delta_max > 0.0, "ocp.bounds.delta_max", "must be > 0");
  d.check(b.delta_rate_max > 0.0, "ocp.bounds.delta_rate_max", "must be > 0");
  d.check(b.a_y_max > 0.0, "ocp.bounds.a_y_max", "must be > 0");
  d.check(b.a_x_min < b.a_x_max, "ocp.bounds.a_x_min", "must be < ocp.bounds.a_x_max");
  d.check(b.a_x_c_min < b.a_x_c_max, "ocp.bounds.a_x_c_min", "must be < ocp.bounds.a_x_c_max");
  d.check(b.a_x_c_rate_min < b.a_x_c_rate_max, "ocp.bounds.a_x_c_rate_min",
          "must be < ocp.bounds.a_x_c_rate_max");
  d.check(b.v_x_min > 0.0 && b.v_x_min < b.v_x_max, "ocp.bounds.v_x_min",
          "must lie in (0, ocp.bounds.v_x_max)");
  d.check(o.slack_weight > 0.0, "ocp.slack_weight", "must be > 0");
  d.check(o.max_iterations >= 1, "ocp.max_iterations", "must be >= 1");
  d.check(o.kkt_tolerance > 0.0, "ocp.kkt_tolerance", "must be > 0");
  d.check(o.gap_tolerance > 0.0, "ocp.gap_tolerance", "must be > 0");
  d.check(o.model_v_x_guard > 0.0 && o.model_v_x_guard <= b.v_x_min, "ocp.model_v_x_guard",
          "must lie in (0, ocp.bounds.v_x_min]");

  if (check_duration_margin && b.a_x_c_min < 0.0) {
    const double braking = (c.initial_speed - b.v_x_min) / -b.a_x_c_min;
    const double needed = c.injection_time + c.lane_change_duration + braking + 5.0;
    std::ostringstream msg;
    msg << "must be >= " << needed << " s to cover the manoeuvre plus a 5 s settling margin";
    d.check(c.duration >= needed, "scenario.duration", msg.str());
  }
  return d.take();
}

OcpConfig controller_config(const ScenarioConfig & config)
{
  OcpConfig cfg = config.ocp;
  cfg.vehicle = config.vehicle;
  cfg.actuation_tau = config.actuation_tau;
  if (config.reconfigure) {
    cfg = reconfigure(cfg, config.plant_fault);
  }
  return cfg;
}

SimTrace run_scenario(const ScenarioConfig & config)
{
  if (const auto errors = validate_scenario(config); !errors.empty()) {
    throw InvalidArgumentError("invalid scenario config: " + errors.front());
  }

  SimTrace trace;
  trace.config = config;
  trace.controller_config = controller_config(config);
  const OcpConfig & ctrl_cfg = trace.controller_config;

  const double dt = config.dt;
  const double v_x_min = config.ocp.bounds.v_x_min;
  const auto n_steps = static_cast<std::int64_t>(std::llround(config.duration / dt));
  const auto control_period = static_cast<std::int64_t>(std::llround(ctrl_cfg.dt / dt));
  const auto plant_act =
    ActuationModel::first_order_lag(config.actuation_tau, dt / config.plant_substeps);
  const StepOptions plant_opts{v_x_min, true};

  AccConfig acc = config.acc;
  acc.v_ref = config.initial_speed;

  // Steady state: equal speeds, gaps h_dg v.
  std::array<VehicleState, kNumVehicles> x{};
  const double gap = acc.h_dg * config.initial_speed;
  for (int i = 0; i < kNumVehicles; ++i) {
    x[static_cast<std::size_t>(i)].v_x = config.initial_speed;
    x[static_cast<std::size_t>(i)].d_x = gap * (kNumVehicles - 1 - i);
  }

  std::array<PdState, kNumVehicles> pd{};
  MpcControllerState mpc;
  TacticalDecisionMaker tdm(config.lane, v_x_min);
  int tv_target = kFaulty;
  std::int64_t step_a = 0;
  std::optional<QuinticPath> path;
  ControlInput fv_hold{};
  OcpSolution last_solution;
  bool have_solution = false;

  trace.steps.reserve(static_cast<std::size_t>(n_steps + 1));

  for (std::int64_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    StepRecord rec;
    rec.step = k;
    rec.t = t;
    rec.states = x;

    const auto & lv = x[kLead];
    const auto & fv = x[kFaulty];
    const auto & tv = x[kTrailing];

    const bool fault_active = config.inject_fault && t >= config.injection_time - 1e-12;
    const FaultVector fv_fault = fault_active ? config.plant_fault : FaultVector::nominal();
    rec.fv_plant_fault = fv_fault;

    TdmInputs tin;
    tin.fsc_event = fault_active;
    tin.shoulder_long_enough = config.strategy == BrakingStrategy::kBrakeOutOfLane;
    tin.stop_reached = stop_condition(fv, v_x_min, config.lane.shoulder_offset);
    const TdmCommand cmd = tdm.step(tin, fv, t);
    const TdmState & ts = tdm.state();
    if (ts.t_a.has_value() && !trace.t_a.has_value()) {
      trace.t_a = ts.t_a;
      step_a = k;
      path = fit_quintic(fv.d_y, 0.0, 0.0, config.lane.shoulder_offset, 0.0, 0.0,
                         config.lane_change_duration);
      trace.path = path;
    }
    if (cmd.notify_tv_close_gap) {
      trace.t_b = ts.t_b;
      tv_target = kLead;
    }
    if (ts.mode == TdmMode::kStopped && !trace.t_stopped.has_value()) {
      trace.t_stopped = t;
    }

    std::array<ControlInput, kNumVehicles> u{};
    const bool last_row = k == n_steps;
    if (!last_row) {
      u[kLead].a_x_c = cruise_longitudinal_command(lv, acc, acc.lead_gains, pd[kLead], dt);
      if (cmd.takeover) {
        if ((k - step_a) % control_period == 0) {
          const double t_path = static_cast<double>(k - step_a) * dt + ctrl_cfg.dt;
          auto refs = sample_reference(
            *path, t_path, cmd.goal_velocity, ctrl_cfg.horizon, ctrl_cfg.dt, fv.v_x);
          rec.fv_reference = refs.front();
          auto [applied, sol] = mpc_step(mpc, fv, std::move(refs), ctrl_cfg);
          fv_hold = applied;
          last_solution = std::move(sol);
          have_solution = true;
        }
        u[kFaulty] = fv_hold;
      } else {
        u[kFaulty].a_x_c =
          acc_longitudinal_command(fv, lv, acc, acc.follower_gains, pd[kFaulty], dt);
      }
      const auto & target = x[static_cast<std::size_t>(tv_target)];
      u[kTrailing].a_x_c =
        acc_longitudinal_command(tv, target, acc, acc.follower_gains, pd[kTrailing], dt);
    }
    rec.inputs = u;
    if (!cmd.takeover && !last_row) {
      mpc.previous_input = ControlInput{u[kFaulty].a_x_c, 0.0};
    }

    rec.e_tg_fv_lv = safe_time_gap_error(lv, fv, acc.h_dg);
    rec.e_tg_tv_fv = safe_time_gap_error(fv, tv, acc.h_dg);
    rec.e_tg_tv_lv = safe_time_gap_error(lv, tv, acc.h_dg);
    rec.tv_target = tv_target;
    rec.mode = ts.mode;
    rec.takeover = cmd.takeover;
    rec.goal_velocity = cmd.goal_velocity;
    if (cmd.takeover && have_solution) {
      rec.solver_active = true;
      rec.solver_status = last_solution.status;
      rec.solver_iterations = last_solution.iterations;
      rec.kkt_residual = last_solution.kkt_residual;
      rec.slack = last_solution.slack_used;
      rec.a_y_model = lateral_acceleration(
        fv, u[kFaulty].delta, ctrl_cfg.vehicle, ctrl_cfg.fault_assumed, v_x_min);
      rec.a_y_plant =
        lateral_acceleration(fv, u[kFaulty].delta, config.vehicle, fv_fault, v_x_min);
    }
    trace.steps.push_back(rec);
    if (last_row) {
      break;
    }

    for (int i = 0; i < kNumVehicles; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      const FaultVector f = i == kFaulty ? fv_fault : FaultVector::nominal();
      for (int s = 0; s < config.plant_substeps; ++s) {
        x[iu] = step_discrete(x[iu], u[iu], config.vehicle, f, plant_act, plant_opts);
      }
      if (!x[iu].is_finite()) {
        std::ostringstream msg;
        msg << "non-finite state of " << slot_name(i) << " at t = " << t;
        throw SimulationAbort(msg.str());
      }
    }
  }
  return trace;
}

std::vector<ScenarioConfig> paper_suite(const ScenarioConfig & base)
{
  std::vector<ScenarioConfig> runs;
  auto make = [&](const char * name, BrakingStrategy strategy, FaultVector fault, bool reconf) {
    ScenarioConfig c = base;
    c.name = name;
    c.strategy = strategy;
    c.plant_fault = fault;
    c.reconfigure = reconf;
    c.inject_fault = true;
    runs.push_back(c);
  };
  make("bil_nominal", BrakingStrategy::kBrakeInLane, {1.0, 1.0}, false);
  make("bol_nominal", BrakingStrategy::kBrakeOutOfLane, {1.0, 1.0}, false);
  make("bil_f1", BrakingStrategy::kBrakeInLane, {0.5, 1.0}, false);
  make("bil_f2", BrakingStrategy::kBrakeInLane, {1.0, 0.5}, false);
  make("bil_f1_reconfigured", BrakingStrategy::kBrakeInLane, {0.5, 1.0}, true);
  make("bil_f2_reconfigured", BrakingStrategy::kBrakeInLane, {1.0, 0.5}, true);
  return runs;
}

ScenarioConfig baseline_of(const ScenarioConfig & config)
{
  ScenarioConfig c = config;
  c.name = "bil_nominal";
  c.strategy = BrakingStrategy::kBrakeInLane;
  c.plant_fault = FaultVector::nominal();
  c.reconfigure = false;
  c.inject_fault = true;
  return c;
}

}  // namespace failsafe
