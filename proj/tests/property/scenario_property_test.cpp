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

// Closed-loop properties that must survive moderate changes of the scenario
// parameters the reference results do not pin down.

#include <gtest/gtest.h>

#include <string>

#include "failsafe/metrics.hpp"
#include "failsafe/scenario.hpp"

namespace failsafe
{
namespace
{

struct Perturbation
{
  std::string label;
  double speed_scale{1.0};
  double time_gap_scale{1.0};
  double lane_change_scale{1.0};
};

ScenarioConfig perturbed(const Perturbation & p)
{
  ScenarioConfig c;
  c.initial_speed *= p.speed_scale;
  c.acc.h_dg *= p.time_gap_scale;
  c.lane_change_duration *= p.lane_change_scale;
  return c;
}

class StrategyOrdering : public ::testing::TestWithParam<Perturbation>
{
};

TEST_P(StrategyOrdering, BrakeInLaneStopsSoonerAndStressesTheStringMore)
{
  ScenarioConfig bil = perturbed(GetParam());
  ScenarioConfig bol = bil;
  bol.strategy = BrakingStrategy::kBrakeOutOfLane;
  const MetricsReport a = compute_metrics(run_scenario(bil));
  const MetricsReport b = compute_metrics(run_scenario(bol));
  ASSERT_TRUE(a.stop_time && b.stop_time && a.stop_distance && b.stop_distance);
  ASSERT_TRUE(a.tv_gap_closing_time && b.tv_gap_closing_time && a.e_tg_at_t_b && b.e_tg_at_t_b);
  EXPECT_LT(*a.stop_time, *b.stop_time);
  EXPECT_LT(*a.stop_distance, *b.stop_distance);
  EXPECT_GT(*a.tv_gap_closing_time, *b.tv_gap_closing_time);
  EXPECT_GT(*a.e_tg_at_t_b, *b.e_tg_at_t_b);
}

INSTANTIATE_TEST_SUITE_P(
  ScenarioParameters, StrategyOrdering,
  ::testing::Values(Perturbation{"slower", 0.8, 1.0, 1.0}, Perturbation{"faster", 1.2, 1.0, 1.0},
                    Perturbation{"shorter_gap", 1.0, 0.8, 1.0},
                    Perturbation{"longer_gap", 1.0, 1.2, 1.0},
                    Perturbation{"quicker_lane_change", 1.0, 1.0, 0.8},
                    Perturbation{"slower_lane_change", 1.0, 1.0, 1.2}),
  [](const ::testing::TestParamInfo<Perturbation> & info) { return info.param.label; });

struct FaultCase
{
  std::string label;
  FaultVector fault;
};

class ReconfigurationDominance : public ::testing::TestWithParam<FaultCase>
{
};

// Knowing the fault brings the lateral path closer to the nominal manoeuvre.
// A softer rear axle needs a different yaw-rate profile to follow the same
// path, so yaw-rate tracking only has to improve for pure steering faults.
TEST_P(ReconfigurationDominance, ReconfiguredRunTracksBaselineMoreClosely)
{
  ScenarioConfig faulty;
  faulty.plant_fault = GetParam().fault;
  ScenarioConfig reconfigured = faulty;
  reconfigured.reconfigure = true;
  const SimTrace baseline = run_scenario(baseline_of(faulty));
  const MetricsReport plain = compute_metrics(run_scenario(faulty), &baseline);
  const MetricsReport known = compute_metrics(run_scenario(reconfigured), &baseline);
  ASSERT_TRUE(plain.max_d_y_error && known.max_d_y_error);
  ASSERT_TRUE(plain.max_r_error && known.max_r_error);
  EXPECT_LT(*known.max_d_y_error, *plain.max_d_y_error);
  if (GetParam().fault.f2 == 1.0) {
    EXPECT_LT(*known.max_r_error, *plain.max_r_error);
  }
}

INSTANTIATE_TEST_SUITE_P(
  Faults, ReconfigurationDominance,
  ::testing::Values(FaultCase{"steering", {0.5, 1.0}}, FaultCase{"rear_stiffness", {1.0, 0.5}},
                    FaultCase{"both", {0.7, 0.7}}),
  [](const ::testing::TestParamInfo<FaultCase> & info) { return info.param.label; });

}  // namespace
}  // namespace failsafe
