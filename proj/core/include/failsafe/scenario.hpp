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

#ifndef FAILSAFE__SCENARIO_HPP_
#define FAILSAFE__SCENARIO_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "failsafe/acc_control.hpp"
#include "failsafe/dynamics.hpp"
#include "failsafe/ocp_solver.hpp"
#include "failsafe/tdm.hpp"
#include "failsafe/trajectory.hpp"

namespace failsafe
{

/// Vehicle slots of the three-vehicle string.
enum VehicleSlot : int { kLead = 0, kFaulty = 1, kTrailing = 2 };
inline constexpr int kNumVehicles = 3;

std::string_view slot_name(int slot);

struct ScenarioConfig
{
  std::string name{"default"};
  VehicleParams vehicle{};
  double actuation_tau{0.1};
  AccConfig acc{};
  OcpConfig ocp{};
  LaneGeometry lane{};
  double lane_change_duration{4.5};  // T_lc [s]

  double initial_speed{25.0};
  BrakingStrategy strategy{BrakingStrategy::kBrakeInLane};
  FaultVector plant_fault{};
  bool reconfigure{false};  // controller knows the fault exactly
  bool inject_fault{true};  // raise the classification event at injection_time
  double injection_time{2.0};
  double duration{35.0};
  double dt{0.01};
  int plant_substeps{1};
  std::uint64_t seed{0};

  bool operator==(const ScenarioConfig &) const = default;
};

/// One sample of the string at time t. Inputs are those applied over [t, t + dt).
struct StepRecord
{
  std::int64_t step{0};
  double t{0.0};
  std::array<VehicleState, kNumVehicles> states{};
  std::array<ControlInput, kNumVehicles> inputs{};
  FaultVector fv_plant_fault{};

  // Time-gap errors; NaN when the pair is not ordered.
  double e_tg_fv_lv{0.0};
  double e_tg_tv_fv{0.0};
  double e_tg_tv_lv{0.0};
  int tv_target{kFaulty};

  TdmMode mode{TdmMode::kNominal};
  bool takeover{false};
  double goal_velocity{0.0};
  ReferencePoint fv_reference{};

  bool solver_active{false};
  SolveStatus solver_status{SolveStatus::kConverged};
  int solver_iterations{0};
  double kkt_residual{0.0};
  double slack{0.0};
  double a_y_model{0.0};  // prediction-model parameters (assumed fault)
  double a_y_plant{0.0};  // true plant parameters
};

struct SimTrace
{
  ScenarioConfig config;
  std::vector<StepRecord> steps;
  std::optional<double> t_a;
  std::optional<double> t_b;
  std::optional<double> t_stopped;  // online stop detector
  std::optional<QuinticPath> path;
  OcpConfig controller_config;      // after optional reconfiguration
};

/// Instantaneous stop test of the faulty vehicle.
bool stop_condition(
  const VehicleState & fv, double goal_velocity, double goal_d_y, double v_tolerance = 0.01,
  double d_y_tolerance = 0.001);

/// Configuration errors, each prefixed with its field path; empty when valid.
/// With check_duration_margin the run must also extend 5 s past the
/// estimated end of the braking manoeuvre.
std::vector<std::string> validate_scenario(
  const ScenarioConfig & config, bool check_duration_margin = false);

/// Runs the three-vehicle string. Throws InvalidArgumentError on an invalid
/// config and SimulationAbort on non-finite states.
SimTrace run_scenario(const ScenarioConfig & config);

/// Controller configuration used by the faulty vehicle's safety channel.
OcpConfig controller_config(const ScenarioConfig & config);

/// The six runs of the reproduction suite, in fixed order:
/// BIL, BOL, BIL f1, BIL f2, BIL f1 reconfigured, BIL f2 reconfigured.
std::vector<ScenarioConfig> paper_suite(const ScenarioConfig & base);

/// BIL without failure, the reference for error metrics.
ScenarioConfig baseline_of(const ScenarioConfig & config);

}  // namespace failsafe

#endif  // FAILSAFE__SCENARIO_HPP_
