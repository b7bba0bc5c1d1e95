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

#include "failsafe/tdm.hpp"

#include <cmath>
#include <utility>

#include "failsafe/errors.hpp"

namespace failsafe
{

std::string_view to_string(TdmMode mode)
{
  switch (mode) {
    case TdmMode::kNominal:
      return "nominal";
    case TdmMode::kParkRequested:
      return "park_requested";
    case TdmMode::kLaneChangeActive:
      return "lane_change";
    case TdmMode::kBrakingToStop:
      return "braking";
    case TdmMode::kStopped:
      return "stopped";
  }
  return "unknown";
}

std::string_view to_string(BrakingStrategy strategy)
{
  return strategy == BrakingStrategy::kBrakeInLane ? "BIL" : "BOL";
}

bool detect_lane_departure(double d_y, double lane_width, double vehicle_width)
{
  return std::abs(d_y) >= 0.5 * lane_width + 0.5 * vehicle_width;
}

std::pair<TdmState, TdmCommand> fsm_step(
  const TdmState & state, const TdmInputs & in, const VehicleState & ego,
  const LaneGeometry & lane, double t, double v_x_min)
{
  TdmState next = state;
  TdmCommand cmd;

  switch (state.mode) {
    case TdmMode::kNominal:
      if (in.fsc_event) {
        next.mode = TdmMode::kParkRequested;
        next.strategy = in.shoulder_long_enough ? BrakingStrategy::kBrakeOutOfLane
                                                : BrakingStrategy::kBrakeInLane;
        next.t_a = t;
        next.held_velocity = ego.v_x;
      }
      break;
    case TdmMode::kParkRequested:
      next.mode = TdmMode::kLaneChangeActive;
      break;
    case TdmMode::kLaneChangeActive:
      break;
    case TdmMode::kBrakingToStop:
      if (in.stop_reached) {
        next.mode = TdmMode::kStopped;
      }
      break;
    case TdmMode::kStopped:
      break;
  }

  // Lane departure is checked in every manoeuvre mode so that a departure in
  // the first manoeuvre step is not missed.
  if (next.mode != TdmMode::kNominal && !next.t_b.has_value() &&
      detect_lane_departure(ego.d_y, lane.lane_width, lane.vehicle_width))
  {
    next.t_b = t;
    next.tv_notified = true;
    cmd.notify_tv_close_gap = true;
    if (next.mode == TdmMode::kLaneChangeActive || next.mode == TdmMode::kParkRequested) {
      next.mode = TdmMode::kBrakingToStop;
    }
  }

  if (next.mode != TdmMode::kNominal) {
    cmd.takeover = true;
    const bool hold = next.strategy == BrakingStrategy::kBrakeOutOfLane && !next.t_b.has_value();
    cmd.goal_velocity = hold ? next.held_velocity : v_x_min;
  }
  return {next, cmd};
}

TacticalDecisionMaker::TacticalDecisionMaker(LaneGeometry lane, double v_x_min)
: lane_(lane), v_x_min_(v_x_min)
{
  if (!(lane_.lane_width > lane_.vehicle_width) || !(lane_.vehicle_width > 0.0)) {
    throw InvalidArgumentError("lane geometry requires lane_width > vehicle_width > 0");
  }
}

TdmCommand TacticalDecisionMaker::step(const TdmInputs & in, const VehicleState & ego, double t)
{
  if (last_t_.has_value() && t < *last_t_) {
    throw InvalidArgumentError("tactical decision making requires monotone time");
  }
  last_t_ = t;
  auto [next, cmd] = fsm_step(state_, in, ego, lane_, t, v_x_min_);
  state_ = next;
  return cmd;
}

}  // namespace failsafe
