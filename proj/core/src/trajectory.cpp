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

#include "failsafe/trajectory.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "failsafe/errors.hpp"

namespace failsafe
{
namespace
{

ReferencePoint reference_at(
  const QuinticPath & path, double t, double goal_velocity, double planned_speed)
{
  // The path holds its endpoints outside [0, duration].
  const double slope = path.velocity(t);
  ReferencePoint z;
  z.z_v_x = goal_velocity;
  z.z_d_y = path.position(t);
  z.z_theta = planned_speed > 0.0 ? std::atan(slope / planned_speed) : 0.0;
  return z;
}

}  // namespace

double QuinticPath::position(double t) const
{
  const double tc = std::clamp(t, 0.0, duration);
  double p = coeffs[5];
  for (int i = 4; i >= 0; --i) {
    p = p * tc + coeffs[i];
  }
  return p;
}

double QuinticPath::velocity(double t) const
{
  // Held endpoints have zero slope.
  if (t < 0.0 || t > duration) {
    return 0.0;
  }
  double v = 5.0 * coeffs[5];
  for (int i = 4; i >= 1; --i) {
    v = v * t + i * coeffs[i];
  }
  return v;
}

double QuinticPath::acceleration(double t) const
{
  if (t < 0.0 || t > duration) {
    return 0.0;
  }
  double a = 20.0 * coeffs[5];
  for (int i = 4; i >= 2; --i) {
    a = a * t + i * (i - 1) * coeffs[i];
  }
  return a;
}

QuinticPath fit_quintic(
  double y0, double y0_dot, double y0_ddot, double yf, double yf_dot, double yf_ddot,
  double duration)
{
  if (!(duration > 0.0)) {
    throw InvalidArgumentError("quintic fit requires a positive duration");
  }
  const double t = duration;
  Eigen::Matrix<double, 6, 6> m;
  m.setZero();
  // rows: p(0), p'(0), p''(0), p(T), p'(T), p''(T)
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 2) = 2.0;
  for (int i = 0; i < 6; ++i) {
    m(3, i) = std::pow(t, i);
    m(4, i) = i >= 1 ? i * std::pow(t, i - 1) : 0.0;
    m(5, i) = i >= 2 ? i * (i - 1) * std::pow(t, i - 2) : 0.0;
  }
  Eigen::Matrix<double, 6, 1> rhs;
  rhs << y0, y0_dot, y0_ddot, yf, yf_dot, yf_ddot;

  const Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(m);
  Eigen::Matrix<double, 6, 1> a = lu.solve(rhs);
  a += lu.solve(rhs - m * a);  // one refinement step

  QuinticPath path;
  for (int i = 0; i < 6; ++i) {
    path.coeffs[static_cast<std::size_t>(i)] = a(i);
  }
  path.duration = duration;
  path.y_start = y0;
  path.y_goal = yf;
  return path;
}

std::vector<ReferencePoint> sample_reference(
  const QuinticPath & path, double t_now, double goal_velocity, int horizon, double dt,
  double planned_speed)
{
  std::vector<ReferencePoint> refs;
  refs.reserve(static_cast<std::size_t>(std::max(horizon, 0)));
  for (int k = 0; k < horizon; ++k) {
    refs.push_back(reference_at(path, t_now + k * dt, goal_velocity, planned_speed));
  }
  return refs;
}

std::vector<ReferencePoint> sample_reference_steps(
  const QuinticPath & path, std::int64_t first_step, double goal_velocity, int horizon,
  double dt, double planned_speed)
{
  std::vector<ReferencePoint> refs;
  refs.reserve(static_cast<std::size_t>(std::max(horizon, 0)));
  for (int k = 0; k < horizon; ++k) {
    const double t = static_cast<double>(first_step + k) * dt;
    refs.push_back(reference_at(path, t, goal_velocity, planned_speed));
  }
  return refs;
}

}  // namespace failsafe
