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

#ifndef FAILSAFE__OCP_SOLVER_HPP_
#define FAILSAFE__OCP_SOLVER_HPP_

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "failsafe/dynamics.hpp"
#include "failsafe/trajectory.hpp"

namespace failsafe
{

struct CostWeights
{
  double w_v_x{10.0};
  double w_d_y{100.0};
  double w_theta{1.0};
  double w_a_x{0.5};
  double w_delta{1.0};

  bool operator==(const CostWeights &) const = default;
};

struct OcpBounds
{
  double delta_max{0.0873};       // |delta| [rad]
  double delta_rate_max{0.0818};  // |d delta/dt| [rad/s]
  double a_x_min{-3.5};
  double a_x_max{1.5};
  double a_x_c_min{-3.5};
  double a_x_c_max{1.5};
  double a_x_c_rate_min{-14.0};   // [m/s^3]
  double a_x_c_rate_max{6.0};
  double v_x_min{1.26};
  double v_x_max{33.0};
  double a_y_max{2.0};            // |a_y| [m/s^2]

  bool operator==(const OcpBounds &) const = default;
};

struct OcpConfig
{
  int horizon{30};          // N
  int control_horizon{30};  // S, controls held constant from S to N
  double dt{0.01};
  CostWeights weights{};
  OcpBounds bounds{};
  FaultVector fault_assumed{};
  double slack_weight{1e4};

  // Internal prediction model.
  VehicleParams vehicle{};
  double actuation_tau{0.1};
  // Singularity guard of the prediction model, below the soft v_x floor.
  double model_v_x_guard{0.1};

  int max_iterations{50};
  double kkt_tolerance{1e-6};
  double gap_tolerance{1e-8};
  // Soft-constraint violation tolerated before a solve is flagged infeasible_soft.
  double slack_tolerance{1e-6};

  bool operator==(const OcpConfig &) const = default;
};

enum class SolveStatus { kConverged, kMaxIterations, kInfeasibleSoft, kQpFailure };

std::string_view to_string(SolveStatus status);

struct OcpSolution
{
  std::vector<ControlInput> controls;        // N entries (blocked controls expanded)
  std::vector<VehicleState> predicted_states; // N + 1 entries
  SolveStatus status{SolveStatus::kConverged};
  double kkt_residual{0.0};
  double max_gap{0.0};
  int iterations{0};
  double slack_used{0.0};
  double cost{0.0};
  std::vector<double> merit_history;  // merit at each accepted iterate
};

/// Optimal control problem instance: initial state, references and the input
/// applied in the previous control step (for the k = 0 rate constraint).
struct Ocp
{
  VehicleState x_init{};
  std::vector<ReferencePoint> refs;
  OcpConfig config{};
  ControlInput previous_input{};

  int num_control_variables() const { return 2 * config.control_horizon; }
  int num_shooting_states() const { return VehicleState::kSize * (config.horizon + 1); }
  /// Index of the control block driving step k.
  int block_of(int k) const { return k < config.control_horizon ? k : config.control_horizon - 1; }
};

/// J = w_v (z_v - v_x)^2 + w_dy (z_dy - d_y)^2 + w_th (z_th - theta)^2
///     + w_ax a_x_c^2 + w_delta delta^2
double stage_cost(
  const VehicleState & x, const ControlInput & u, const ReferencePoint & z,
  const CostWeights & weights);

/// Fault-aware reconfiguration: the prediction model takes the known fault,
/// steering and steering-rate bounds scale by 1 / f1 and the steering weight
/// by f1^2, so the controller acts on the effective road-wheel angle.
OcpConfig reconfigure(const OcpConfig & config, const FaultVector & fault_known);

/// Throws InvalidArgumentError on dimension or configuration errors.
Ocp build_ocp(
  const VehicleState & x_init, std::vector<ReferencePoint> refs, const OcpConfig & config,
  const ControlInput & previous_input = {});

/// Multiple-shooting Gauss-Newton SQP. The cost sums stage_cost over
/// (x(k+1), u(k), refs[k]) for k = 0..N-1.
OcpSolution solve(const Ocp & ocp, const OcpSolution * warm_start = nullptr);

/// Gauss-Newton model of the cost around the exact rollout of a blocked
/// control vector (a_x_c, delta interleaved per block):
///   cost(u + dw) ~ 0.5 dw' H dw + g' dw + cost(u).
struct Linearization
{
  Eigen::MatrixXd hessian;
  Eigen::VectorXd gradient;
  double cost{0.0};
  double model_constant{0.0};  // value of the model at dw = 0
};

Linearization linearize(const Ocp & ocp, const Eigen::VectorXd & blocked_controls);

/// Receding-horizon wrapper owning the warm start and last applied input.
struct MpcControllerState
{
  ControlInput previous_input{};
  std::optional<OcpSolution> last_solution;
};

std::pair<ControlInput, OcpSolution> mpc_step(
  MpcControllerState & state, const VehicleState & measured,
  std::vector<ReferencePoint> refs, const OcpConfig & config);

/// Prediction model of a configuration (unclamped, guarded below v_x_min).
VehicleState predict_step(const VehicleState & x, const ControlInput & u, const OcpConfig & config);

void validate(const OcpConfig & config);

}  // namespace failsafe

#endif  // FAILSAFE__OCP_SOLVER_HPP_
