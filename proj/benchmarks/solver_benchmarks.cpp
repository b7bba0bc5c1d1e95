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

#include <benchmark/benchmark.h>

#include <vector>

#include "failsafe/dynamics.hpp"
#include "failsafe/ocp_solver.hpp"
#include "failsafe/trajectory.hpp"

namespace
{

using namespace failsafe;

VehicleState lane_change_state()
{
  VehicleState x;
  x.v_x = 24.0;
  x.a_x = -1.0;
  x.v_y = -0.05;
  x.d_y = -0.4;
  x.r = -0.01;
  x.theta = -0.01;
  return x;
}

std::vector<ReferencePoint> lane_change_refs(const OcpConfig & cfg)
{
  const auto path = fit_quintic(0, 0, 0, -3.5, 0, 0, 4.5);
  return sample_reference(path, 1.0, 20.0, cfg.horizon, cfg.dt, 24.0);
}

void BM_StepDiscrete(benchmark::State & state)
{
  const VehicleParams params{};
  const auto act = ActuationModel::first_order_lag(0.1, 0.01);
  VehicleState x = lane_change_state();
  const ControlInput u{-1.0, 0.01};
  for (auto _ : state) {
    x = step_discrete(x, u, params, FaultVector{0.5, 1.0}, act);
    x.v_x = 24.0;
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_StepDiscrete);

void BM_DynamicsJacobians(benchmark::State & state)
{
  const auto act = ActuationModel::first_order_lag(0.1, 0.01);
  const VehicleState x = lane_change_state();
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynamics_jacobians(x, {-1.0, 0.01}, VehicleParams{}, {}, act));
  }
}
BENCHMARK(BM_DynamicsJacobians);

// Full SQP solve from a cold start, for the horizon given as argument.
void BM_OcpColdSolve(benchmark::State & state)
{
  OcpConfig cfg;
  cfg.horizon = static_cast<int>(state.range(0));
  cfg.control_horizon = cfg.horizon;
  const Ocp ocp = build_ocp(lane_change_state(), lane_change_refs(cfg), cfg);
  int iterations = 0;
  for (auto _ : state) {
    const OcpSolution sol = solve(ocp);
    iterations = sol.iterations;
    benchmark::DoNotOptimize(sol);
  }
  state.counters["sqp_iterations"] = iterations;
}
BENCHMARK(BM_OcpColdSolve)->Arg(10)->Arg(30)->Arg(50)->Unit(benchmark::kMicrosecond);

// Receding-horizon solve warm-started from the previous step's solution.
void BM_OcpWarmSolve(benchmark::State & state)
{
  const OcpConfig cfg;
  const VehicleState x0 = lane_change_state();
  const Ocp first = build_ocp(x0, lane_change_refs(cfg), cfg);
  const OcpSolution previous = solve(first);
  const auto act = ActuationModel::first_order_lag(cfg.actuation_tau, cfg.dt);
  const VehicleState x1 = step_discrete(x0, previous.controls.front(), cfg.vehicle, {}, act);
  const auto path = fit_quintic(0, 0, 0, -3.5, 0, 0, 4.5);
  const Ocp next = build_ocp(x1, sample_reference(path, 1.0 + cfg.dt, 20.0, cfg.horizon, cfg.dt,
                                                  x1.v_x),
                             cfg, previous.controls.front());
  int iterations = 0;
  for (auto _ : state) {
    const OcpSolution sol = solve(next, &previous);
    iterations = sol.iterations;
    benchmark::DoNotOptimize(sol);
  }
  state.counters["sqp_iterations"] = iterations;
}
BENCHMARK(BM_OcpWarmSolve)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
