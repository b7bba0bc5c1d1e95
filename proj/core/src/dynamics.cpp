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

#include "failsafe/dynamics.hpp"

#include <cmath>
#include <string>

#include "failsafe/errors.hpp"

namespace failsafe
{
namespace
{

void require_speed(double v_x, double v_x_min)
{
  if (!(v_x >= v_x_min)) {
    throw SingularVelocityError(
      "single-track model evaluated at v_x = " + std::to_string(v_x) + " below floor " +
      std::to_string(v_x_min));
  }
}

// Stiffness combinations that appear in the lateral equations.
struct Coefficients
{
  double k_sum;     // C_af + C_ar f2
  double k_moment;  // l_r C_ar f2 - l_f C_af
  double k_inertia; // l_f^2 C_af + l_r^2 C_ar f2
};

Coefficients coefficients(const VehicleParams & p, const FaultVector & f)
{
  const double c_r = p.c_alpha_r * f.f2;
  return {
    p.c_alpha_f + c_r,
    p.l_r * c_r - p.l_f * p.c_alpha_f,
    p.l_f * p.l_f * p.c_alpha_f + p.l_r * p.l_r * c_r};
}

}  // namespace

VehicleState::Vector VehicleState::to_vector() const
{
  Vector x;
  x << a_x, v_x, v_y, d_y, r, theta, d_x;
  return x;
}

VehicleState VehicleState::from_vector(const Vector & x)
{
  return {x(kAx), x(kVx), x(kVy), x(kDy), x(kR), x(kTheta), x(kDx)};
}

bool VehicleState::is_finite() const
{
  return std::isfinite(a_x) && std::isfinite(v_x) && std::isfinite(v_y) && std::isfinite(d_y) &&
         std::isfinite(r) && std::isfinite(theta) && std::isfinite(d_x);
}

ActuationModel ActuationModel::first_order_lag(double tau, double dt)
{
  if (!(dt > 0.0) || !(tau >= dt)) {
    throw InvalidArgumentError("actuation lag requires 0 < dt <= tau");
  }
  const double g = dt / tau;
  return {1.0 - g, g, dt};
}

LateralDerivatives lateral_derivatives(
  const VehicleState & state, double delta, const VehicleParams & params,
  const FaultVector & fault, double v_x_min)
{
  require_speed(state.v_x, v_x_min);
  const auto c = coefficients(params, fault);
  const double vx = state.v_x;
  const double steer = delta * fault.f1;

  LateralDerivatives d;
  d.v_y_dot = -c.k_sum / (params.mass * vx) * state.v_y +
              (c.k_moment / (params.mass * vx) - vx) * state.r +
              params.c_alpha_f / params.mass * steer;
  d.r_dot = c.k_moment / (params.i_z * vx) * state.v_y -
            c.k_inertia / (params.i_z * vx) * state.r +
            params.l_f * params.c_alpha_f / params.i_z * steer;
  return d;
}

VehicleState step_discrete(
  const VehicleState & state, const ControlInput & u, const VehicleParams & params,
  const FaultVector & fault, const ActuationModel & act, const StepOptions & opts)
{
  const auto lat = lateral_derivatives(state, u.delta, params, fault, opts.v_x_min);
  const double dt = act.dt;
  const double cos_t = std::cos(state.theta);
  const double sin_t = std::sin(state.theta);

  VehicleState next;
  next.a_x = act.s_dt * state.a_x + act.g_dt * u.a_x_c;
  next.v_x = state.v_x + state.a_x * dt;
  next.v_y = state.v_y + lat.v_y_dot * dt;
  next.d_y = state.d_y + (state.v_y * cos_t + state.v_x * sin_t) * dt;
  next.r = state.r + lat.r_dot * dt;
  next.theta = state.theta + state.r * dt;
  next.d_x = state.d_x + (state.v_x * cos_t - state.v_y * sin_t) * dt;

  if (opts.clamp_to_floor && next.v_x < opts.v_x_min) {
    next.v_x = opts.v_x_min;
    next.a_x = 0.0;
  }
  return next;
}

DynamicsJacobians dynamics_jacobians(
  const VehicleState & state, const ControlInput & u, const VehicleParams & params,
  const FaultVector & fault, const ActuationModel & act, double v_x_min)
{
  require_speed(state.v_x, v_x_min);
  (void)u;  // the model is affine in the input
  using I = VehicleState::Index;
  const auto c = coefficients(params, fault);
  const double dt = act.dt;
  const double vx = state.v_x;
  const double vx2 = vx * vx;
  const double m = params.mass;
  const double iz = params.i_z;
  const double cos_t = std::cos(state.theta);
  const double sin_t = std::sin(state.theta);

  DynamicsJacobians j;
  j.a.setIdentity();
  j.b.setZero();

  j.a(I::kAx, I::kAx) = act.s_dt;
  j.b(I::kAx, 0) = act.g_dt;

  j.a(I::kVx, I::kAx) = dt;

  j.a(I::kVy, I::kVx) =
    dt * (c.k_sum * state.v_y / (m * vx2) - c.k_moment * state.r / (m * vx2) - state.r);
  j.a(I::kVy, I::kVy) = 1.0 - dt * c.k_sum / (m * vx);
  j.a(I::kVy, I::kR) = dt * (c.k_moment / (m * vx) - vx);
  j.b(I::kVy, 1) = dt * params.c_alpha_f * fault.f1 / m;

  j.a(I::kDy, I::kVx) = dt * sin_t;
  j.a(I::kDy, I::kVy) = dt * cos_t;
  j.a(I::kDy, I::kTheta) = dt * (state.v_x * cos_t - state.v_y * sin_t);

  j.a(I::kR, I::kVx) =
    dt * (-c.k_moment * state.v_y / (iz * vx2) + c.k_inertia * state.r / (iz * vx2));
  j.a(I::kR, I::kVy) = dt * c.k_moment / (iz * vx);
  j.a(I::kR, I::kR) = 1.0 - dt * c.k_inertia / (iz * vx);
  j.b(I::kR, 1) = dt * params.l_f * params.c_alpha_f * fault.f1 / iz;

  j.a(I::kTheta, I::kR) = dt;

  j.a(I::kDx, I::kVx) = dt * cos_t;
  j.a(I::kDx, I::kVy) = -dt * sin_t;
  j.a(I::kDx, I::kTheta) = -dt * (state.v_x * sin_t + state.v_y * cos_t);
  return j;
}

double lateral_acceleration(
  const VehicleState & state, double delta, const VehicleParams & params,
  const FaultVector & fault_assumed, double v_x_min)
{
  require_speed(state.v_x, v_x_min);
  const auto c = coefficients(params, fault_assumed);
  const double m_vx = params.mass * state.v_x;
  return -c.k_sum / m_vx * state.v_y + c.k_moment / m_vx * state.r +
         params.c_alpha_f / params.mass * delta * fault_assumed.f1;
}

Eigen::Vector4d lateral_acceleration_gradient(
  const VehicleState & state, double delta, const VehicleParams & params,
  const FaultVector & fault_assumed, double v_x_min)
{
  require_speed(state.v_x, v_x_min);
  (void)delta;
  const auto c = coefficients(params, fault_assumed);
  const double m = params.mass;
  const double vx = state.v_x;
  Eigen::Vector4d g;
  g(0) = (c.k_sum * state.v_y - c.k_moment * state.r) / (m * vx * vx);
  g(1) = -c.k_sum / (m * vx);
  g(2) = c.k_moment / (m * vx);
  g(3) = params.c_alpha_f / m * fault_assumed.f1;
  return g;
}

}  // namespace failsafe
