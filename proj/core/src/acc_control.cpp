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

#include "failsafe/acc_control.hpp"

#include <algorithm>

#include "failsafe/errors.hpp"

namespace failsafe
{

double time_gap_error(double d_x_prec, double d_x_ego, double v_x_ego, double h_dg)
{
  if (!(v_x_ego > 0.0)) {
    throw InvalidArgumentError("time gap undefined for non-positive ego velocity");
  }
  if (!(d_x_prec > d_x_ego)) {
    throw InvalidArgumentError("preceding vehicle is not ahead of the ego vehicle");
  }
  return h_dg - (d_x_prec - d_x_ego) / v_x_ego;
}

double pd_step(double error, PdState & state, const PdGains & gains, double dt,
               const AccConfig & config)
{
  if (!(dt > 0.0)) {
    throw InvalidArgumentError("pd_step requires dt > 0");
  }
  if (!state.initialized) {
    state.previous_error = error;
    state.derivative = 0.0;
    state.initialized = true;
  }
  const double tau = config.derivative_filter_tau;
  state.derivative = (tau * state.derivative + (error - state.previous_error)) / (tau + dt);
  state.previous_error = error;

  const double raw = gains.k_p * error + gains.k_d * state.derivative;
  return std::clamp(raw, config.a_cmd_min, config.a_cmd_max);
}

double acc_longitudinal_command(
  const VehicleState & ego, const VehicleState & preceding, const AccConfig & config,
  const PdGains & gains, PdState & state, double dt)
{
  const double e_tg = time_gap_error(preceding.d_x, ego.d_x, ego.v_x, config.h_dg);
  return pd_step(e_tg, state, gains, dt, config);
}

double cruise_longitudinal_command(
  const VehicleState & ego, const AccConfig & config, const PdGains & gains, PdState & state,
  double dt)
{
  return pd_step(config.v_ref - ego.v_x, state, gains, dt, config);
}

}  // namespace failsafe
