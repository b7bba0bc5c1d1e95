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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "failsafe/errors.hpp"
#include "failsafe/metrics.hpp"
#include "failsafe/scenario.hpp"

namespace failsafe
{
namespace
{

bool has_diagnostic(const std::vector<std::string> & d, const std::string & field)
{
  return std::any_of(d.begin(), d.end(), [&](const std::string & s) {
    return s.rfind(field + ":", 0) == 0;
  });
}

TEST(ValidateScenario, DefaultsAreClean)
{
  EXPECT_TRUE(validate_scenario(ScenarioConfig{}, true).empty());
}

TEST(ValidateScenario, ZeroTimeGapGivesOneDiagnostic)
{
  ScenarioConfig c;
  c.acc.h_dg = 0.0;
  const auto d = validate_scenario(c, true);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_TRUE(has_diagnostic(d, "acc.h_dg"));
}

TEST(ValidateScenario, ZeroHorizonGivesOneDiagnostic)
{
  ScenarioConfig c;
  c.ocp.horizon = 0;
  const auto d = validate_scenario(c, true);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_TRUE(has_diagnostic(d, "ocp.horizon"));
}

TEST(ValidateScenario, NonPositiveStep)
{
  ScenarioConfig c;
  c.dt = 0.0;
  EXPECT_TRUE(has_diagnostic(validate_scenario(c), "scenario.dt"));
}

TEST(ValidateScenario, BoundOrdering)
{
  ScenarioConfig c;
  c.ocp.bounds.a_x_c_min = 2.0;
  EXPECT_FALSE(validate_scenario(c).empty());
}

TEST(ValidateScenario, DurationMargin)
{
  ScenarioConfig c;
  c.duration = 10.0;
  EXPECT_TRUE(validate_scenario(c, false).empty());
  EXPECT_TRUE(has_diagnostic(validate_scenario(c, true), "scenario.duration"));
}

TEST(RunScenario, ZeroDurationHoldsInitialConditions)
{
  ScenarioConfig c;
  c.duration = 0.0;
  const SimTrace t = run_scenario(c);
  ASSERT_EQ(t.steps.size(), 1u);
  const auto & s = t.steps.front();
  EXPECT_EQ(s.t, 0.0);
  EXPECT_EQ(s.states[kLead].d_x, 2 * 1.2 * 25.0);
  EXPECT_EQ(s.states[kFaulty].d_x, 1.2 * 25.0);
  EXPECT_EQ(s.states[kTrailing].d_x, 0.0);
  for (const auto & x : s.states) {
    EXPECT_EQ(x.v_x, 25.0);
  }
}

TEST(RunScenario, RejectsInvalidConfig)
{
  ScenarioConfig c;
  c.dt = -0.01;
  EXPECT_THROW(run_scenario(c), InvalidArgumentError);
}

TEST(RunScenario, UnfaultedStringStaysAtEquilibrium)
{
  ScenarioConfig c;
  c.inject_fault = false;
  c.duration = 10.0;
  const SimTrace t = run_scenario(c);
  ASSERT_EQ(t.steps.size(), 1001u);
  for (const auto & s : t.steps) {
    EXPECT_LE(std::abs(s.e_tg_fv_lv), 1e-3);
    EXPECT_LE(std::abs(s.e_tg_tv_fv), 1e-3);
    EXPECT_LE(std::abs(s.inputs[kFaulty].a_x_c), 1e-9);
    EXPECT_FALSE(s.takeover);
  }
  EXPECT_FALSE(t.t_a.has_value());
}

class BrakeInLaneRun : public ::testing::Test
{
protected:
  static void SetUpTestSuite()
  {
    ScenarioConfig c;
    c.duration = 20.0;
    trace_ = new SimTrace(run_scenario(c));
  }
  static void TearDownTestSuite()
  {
    delete trace_;
    trace_ = nullptr;
  }
  static SimTrace * trace_;
};

SimTrace * BrakeInLaneRun::trace_ = nullptr;

TEST_F(BrakeInLaneRun, EventOrdering)
{
  ASSERT_TRUE(trace_->t_a.has_value());
  ASSERT_TRUE(trace_->t_b.has_value());
  ASSERT_TRUE(trace_->t_stopped.has_value());
  EXPECT_DOUBLE_EQ(*trace_->t_a, 2.0);
  EXPECT_LT(*trace_->t_a, *trace_->t_b);
  EXPECT_LT(*trace_->t_b, *trace_->t_stopped);
}

TEST_F(BrakeInLaneRun, SpeedNonIncreasingAfterTakeover)
{
  double previous = std::numeric_limits<double>::infinity();
  for (const auto & s : trace_->steps) {
    if (s.t < *trace_->t_a) {
      continue;
    }
    const double v = s.states[kFaulty].v_x;
    EXPECT_LE(v, previous + 1e-12) << "t = " << s.t;
    previous = v;
  }
  EXPECT_NEAR(previous, kDefaultVxMin, 1e-3);
}

TEST_F(BrakeInLaneRun, UniformTimeBase)
{
  for (std::size_t i = 0; i < trace_->steps.size(); ++i) {
    EXPECT_EQ(trace_->steps[i].step, static_cast<std::int64_t>(i));
    EXPECT_NEAR(trace_->steps[i].t, 0.01 * static_cast<double>(i), 1e-12);
  }
}

TEST_F(BrakeInLaneRun, TrailingVehicleRetargetsAtDeparture)
{
  for (const auto & s : trace_->steps) {
    EXPECT_EQ(s.tv_target, s.t < *trace_->t_b - 1e-9 ? kFaulty : kLead) << "t = " << s.t;
  }
}

TEST_F(BrakeInLaneRun, LeadVehicleUnaffected)
{
  for (const auto & s : trace_->steps) {
    EXPECT_NEAR(s.states[kLead].v_x, 25.0, 1e-12);
    EXPECT_EQ(s.states[kLead].d_y, 0.0);
  }
}

TEST_F(BrakeInLaneRun, AppliedControlsWithinBounds)
{
  const OcpBounds & b = trace_->controller_config.bounds;
  for (std::size_t i = 0; i < trace_->steps.size(); ++i) {
    const auto & s = trace_->steps[i];
    for (const auto & u : s.inputs) {
      EXPECT_GE(u.a_x_c, -3.5);
      EXPECT_LE(u.a_x_c, 1.5);
    }
    if (s.solver_active) {
      EXPECT_LE(std::abs(s.inputs[kFaulty].delta), b.delta_max + 1e-6);
      EXPECT_LE(std::abs(s.a_y_model), b.a_y_max + 1e-6);
    }
  }
}

TEST(RunScenario, Deterministic)
{
  ScenarioConfig c;
  c.duration = 6.0;
  c.plant_fault = {0.5, 1.0};
  const SimTrace a = run_scenario(c);
  const SimTrace b = run_scenario(c);
  ASSERT_EQ(a.steps.size(), b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    for (int v = 0; v < kNumVehicles; ++v) {
      EXPECT_EQ(a.steps[i].states[v], b.steps[i].states[v]);
      EXPECT_EQ(a.steps[i].inputs[v], b.steps[i].inputs[v]);
    }
  }
}

TEST(ExperimentSuite, SixRunsInFixedOrder)
{
  const auto suite = paper_suite(ScenarioConfig{});
  ASSERT_EQ(suite.size(), 6u);
  EXPECT_EQ(suite[0].name, "bil_nominal");
  EXPECT_EQ(suite[1].strategy, BrakingStrategy::kBrakeOutOfLane);
  EXPECT_EQ(suite[2].plant_fault, (FaultVector{0.5, 1.0}));
  EXPECT_EQ(suite[3].plant_fault, (FaultVector{1.0, 0.5}));
  EXPECT_TRUE(suite[4].reconfigure);
  EXPECT_TRUE(suite[5].reconfigure);
  for (const auto & c : suite) {
    EXPECT_EQ(baseline_of(c), suite[0]);
  }
}

TEST(ControllerConfig, ReconfigurationFollowsScenario)
{
  ScenarioConfig c;
  c.plant_fault = {0.5, 1.0};
  EXPECT_EQ(controller_config(c).fault_assumed, FaultVector::nominal());
  c.reconfigure = true;
  EXPECT_EQ(controller_config(c).fault_assumed, (FaultVector{0.5, 1.0}));
}

TEST(StopCondition, Thresholds)
{
  VehicleState s;
  s.v_x = 1.265;
  s.d_y = -3.5005;
  EXPECT_TRUE(stop_condition(s, 1.26, -3.5));
  s.v_x = 1.28;
  EXPECT_FALSE(stop_condition(s, 1.26, -3.5));
}

}  // namespace
}  // namespace failsafe
