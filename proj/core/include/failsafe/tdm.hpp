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

#ifndef FAILSAFE__TDM_HPP_
#define FAILSAFE__TDM_HPP_

#include <optional>
#include <string_view>
#include <utility>

#include "failsafe/dynamics.hpp"

namespace failsafe
{

enum class TdmMode { kNominal, kParkRequested, kLaneChangeActive, kBrakingToStop, kStopped };
enum class BrakingStrategy { kBrakeInLane, kBrakeOutOfLane };

std::string_view to_string(TdmMode mode);
std::string_view to_string(BrakingStrategy strategy);

struct LaneGeometry
{
  double lane_width{3.5};
  double vehicle_width{1.8};
  double shoulder_offset{-3.5};  // shoulder center relative to lane center (right is negative)

  bool operator==(const LaneGeometry &) const = default;
};

struct TdmState
{
  TdmMode mode{TdmMode::kNominal};
  BrakingStrategy strategy{BrakingStrategy::kBrakeInLane};
  std::optional<double> t_a;
  std::optional<double> t_b;
  bool tv_notified{false};
  double held_velocity{0.0};  // speed at t_a, held by brake-out-of-lane until t_b
};

struct TdmCommand
{
  bool takeover{false};
  double goal_velocity{0.0};
  bool notify_tv_close_gap{false};
};

/// Per-step inputs. fsc_event and shoulder_long_enough are scripted scenario
/// signals; stop_reached comes from the scenario's stop detector.
struct TdmInputs
{
  bool fsc_event{false};
  bool shoulder_long_enough{false};
  bool stop_reached{false};
};

/// True iff the vehicle body is entirely outside the original lane.
bool detect_lane_departure(double d_y, double lane_width, double vehicle_width);

class TacticalDecisionMaker
{
public:
  explicit TacticalDecisionMaker(LaneGeometry lane = {}, double v_x_min = kDefaultVxMin);

  /// Advances the state machine at time t (must be non-decreasing).
  TdmCommand step(const TdmInputs & in, const VehicleState & ego, double t);

  const TdmState & state() const { return state_; }

private:
  LaneGeometry lane_;
  double v_x_min_;
  TdmState state_;
  std::optional<double> last_t_;
};

/// Functional form of one transition.
std::pair<TdmState, TdmCommand> fsm_step(
  const TdmState & state, const TdmInputs & in, const VehicleState & ego,
  const LaneGeometry & lane, double t, double v_x_min = kDefaultVxMin);

}  // namespace failsafe

#endif  // FAILSAFE__TDM_HPP_
