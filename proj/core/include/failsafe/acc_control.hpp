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

#ifndef FAILSAFE__ACC_CONTROL_HPP_
#define FAILSAFE__ACC_CONTROL_HPP_

#include "failsafe/dynamics.hpp"

namespace failsafe
{

struct PdGains
{
  double k_p{0.0};
  double k_d{0.0};

  static constexpr PdGains lead() { return {5.0, 0.3}; }
  static constexpr PdGains follower() { return {-150.0, -2.5}; }
  bool operator==(const PdGains &) const = default;
};

struct AccConfig
{
  double h_dg{1.2};                   // desired time gap [s]
  double v_ref{25.0};                 // lead cruise reference [m/s]
  double a_cmd_min{-3.5};             // [m/s^2]
  double a_cmd_max{1.5};              // [m/s^2]
  double derivative_filter_tau{0.05}; // [s]
  PdGains lead_gains{PdGains::lead()};
  PdGains follower_gains{PdGains::follower()};

  bool operator==(const AccConfig &) const = default;
};

/// Memory of the filtered-derivative PD realization.
struct PdState
{
  double previous_error{0.0};
  double derivative{0.0};  // filtered de/dt
  bool initialized{false};
};

/// h_dg - (d_x_prec - d_x_ego) / v_x_ego. Positive means the ego is too close.
double time_gap_error(double d_x_prec, double d_x_ego, double v_x_ego, double h_dg);

/// k_p e + k_d s/(tau_f s + 1) e, discretized backward-Euler, saturated to
/// [a_cmd_min, a_cmd_max]. The first call after construction uses no
/// derivative kick.
double pd_step(double error, PdState & state, const PdGains & gains, double dt,
               const AccConfig & config);

/// Constant time-gap ACC command of a following vehicle.
double acc_longitudinal_command(
  const VehicleState & ego, const VehicleState & preceding, const AccConfig & config,
  const PdGains & gains, PdState & state, double dt);

/// Cruise control of the lead vehicle: PD on (v_ref - v_x).
double cruise_longitudinal_command(
  const VehicleState & ego, const AccConfig & config, const PdGains & gains, PdState & state,
  double dt);

}  // namespace failsafe

#endif  // FAILSAFE__ACC_CONTROL_HPP_
