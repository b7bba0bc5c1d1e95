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

#ifndef FAILSAFE__TRAJECTORY_HPP_
#define FAILSAFE__TRAJECTORY_HPP_

#include <array>
#include <cstdint>
#include <vector>

namespace failsafe
{

/// Lateral reference toward the road shoulder, parameterized by manoeuvre
/// time t in [0, duration]. Outside that interval the endpoint is held.
struct QuinticPath
{
  std::array<double, 6> coeffs{};  // p(t) = sum coeffs[i] t^i
  double duration{1.0};
  double y_start{0.0};
  double y_goal{0.0};

  double position(double t) const;
  double velocity(double t) const;
  double acceleration(double t) const;
};

struct ReferencePoint
{
  double z_v_x{0.0};
  double z_d_y{0.0};
  double z_theta{0.0};

  bool operator==(const ReferencePoint &) const = default;
};

/// Boundary-condition fit of a quintic over [0, duration].
/// Throws InvalidArgumentError for duration <= 0.
QuinticPath fit_quintic(
  double y0, double y0_dot, double y0_ddot, double yf, double yf_dot, double yf_ddot,
  double duration);

/// Reference points at path times t_now + k dt, k = 0..horizon-1. Heading is
/// atan(p'(t) / planned_speed).
std::vector<ReferencePoint> sample_reference(
  const QuinticPath & path, double t_now, double goal_velocity, int horizon, double dt,
  double planned_speed);

/// Same as above on an integer time grid: path time (first_step + k) dt.
std::vector<ReferencePoint> sample_reference_steps(
  const QuinticPath & path, std::int64_t first_step, double goal_velocity, int horizon,
  double dt, double planned_speed);

}  // namespace failsafe

#endif  // FAILSAFE__TRAJECTORY_HPP_
