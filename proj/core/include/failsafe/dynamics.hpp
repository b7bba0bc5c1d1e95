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

#ifndef FAILSAFE__DYNAMICS_HPP_
#define FAILSAFE__DYNAMICS_HPP_

#include <Eigen/Core>

namespace failsafe
{

/// Minimum speed at which the single-track model is evaluated and at which the
/// plant is held ("parked" hand-over).
inline constexpr double kDefaultVxMin = 1.26;

/// Physical constants of the linear single-track (bicycle) model.
struct VehicleParams
{
  double c_alpha_f{120.0e3};  // [N/rad]
  double c_alpha_r{220.0e3};  // [N/rad]
  double l_f{1.33};           // [m]
  double l_r{1.47};           // [m]
  double mass{1845.0};        // [kg]
  double i_z{3580.0};         // [kg m^2]

  bool operator==(const VehicleParams &) const = default;
};

/// Fault signals acting on the model: f1 scales the steering angle, f2 scales
/// the rear cornering stiffness. Nominal is (1, 1).
struct FaultVector
{
  double f1{1.0};
  double f2{1.0};

  static constexpr FaultVector nominal() { return {1.0, 1.0}; }
  bool operator==(const FaultVector &) const = default;
};

struct ControlInput
{
  double a_x_c{0.0};  // commanded longitudinal acceleration [m/s^2]
  double delta{0.0};  // front wheel angle [rad]

  bool operator==(const ControlInput &) const = default;
};

/// Vehicle state. The first six entries are the model state vector; d_x is the
/// longitudinal position used for inter-vehicle distances.
struct VehicleState
{
  static constexpr int kSize = 7;
  enum Index : int { kAx = 0, kVx, kVy, kDy, kR, kTheta, kDx };
  using Vector = Eigen::Matrix<double, kSize, 1>;

  double a_x{0.0};
  double v_x{0.0};
  double v_y{0.0};
  double d_y{0.0};
  double r{0.0};
  double theta{0.0};
  double d_x{0.0};

  Vector to_vector() const;
  static VehicleState from_vector(const Vector & x);
  bool is_finite() const;
  bool operator==(const VehicleState &) const = default;
};

/// First-order longitudinal actuation a_x(k+1) = s_dt a_x(k) + g_dt a_x_c(k).
struct ActuationModel
{
  double s_dt{0.9};
  double g_dt{0.1};
  double dt{0.01};

  /// Forward-Euler discretization of 1 / (tau s + 1); requires 0 < dt <= tau.
  static ActuationModel first_order_lag(double tau, double dt);
};

/// Evaluation options. The plant clamps at the floor; the prediction model does not.
struct StepOptions
{
  double v_x_min{kDefaultVxMin};
  bool clamp_to_floor{true};
};

struct LateralDerivatives
{
  double v_y_dot{0.0};
  double r_dot{0.0};
};

using StateJacobian = Eigen::Matrix<double, VehicleState::kSize, VehicleState::kSize>;
using InputJacobian = Eigen::Matrix<double, VehicleState::kSize, 2>;

struct DynamicsJacobians
{
  StateJacobian a;
  InputJacobian b;
};

/// Lateral velocity and yaw-rate derivatives of the single-track model with
/// faults. Throws SingularVelocityError if v_x < v_x_min.
LateralDerivatives lateral_derivatives(
  const VehicleState & state, double delta, const VehicleParams & params,
  const FaultVector & fault, double v_x_min = kDefaultVxMin);

/// One forward-Euler step of the discrete state-update model.
VehicleState step_discrete(
  const VehicleState & state, const ControlInput & u, const VehicleParams & params,
  const FaultVector & fault, const ActuationModel & act, const StepOptions & opts = {});

/// Analytical Jacobians of the unclamped step_discrete w.r.t. state and input.
DynamicsJacobians dynamics_jacobians(
  const VehicleState & state, const ControlInput & u, const VehicleParams & params,
  const FaultVector & fault, const ActuationModel & act, double v_x_min = kDefaultVxMin);

/// Steady-state lateral acceleration used as comfort constraint. With a
/// non-nominal fault_assumed, f2 scales C_alpha_r and f1 scales delta.
double lateral_acceleration(
  const VehicleState & state, double delta, const VehicleParams & params,
  const FaultVector & fault_assumed, double v_x_min = kDefaultVxMin);

/// Gradient of lateral_acceleration w.r.t. (v_x, v_y, r, delta).
Eigen::Vector4d lateral_acceleration_gradient(
  const VehicleState & state, double delta, const VehicleParams & params,
  const FaultVector & fault_assumed, double v_x_min = kDefaultVxMin);

}  // namespace failsafe

#endif  // FAILSAFE__DYNAMICS_HPP_
