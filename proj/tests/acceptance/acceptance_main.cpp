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

// Acceptance runner: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "failsafe/metrics.hpp"
#include "failsafe/scenario.hpp"
#include "failsafe/trace_io.hpp"
#include "support/numerical_checks.hpp"

namespace
{

using failsafe::MetricsReport;
using failsafe::ScenarioConfig;
using failsafe::SimTrace;

struct Run
{
  SimTrace trace;
  MetricsReport metrics;
  double seconds{0.0};
};

int failures = 0;

void report(int id, bool ok, const std::string & title, const std::string & detail)
{
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, title.c_str(),
              detail.c_str());
  std::fflush(stdout);
  failures += ok ? 0 : 1;
}

std::string fmt(const char * f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string opt(const std::optional<double> & v)
{
  return v ? fmt("%.4g", *v) : std::string("unset");
}

std::map<std::string, Run> run_suite()
{
  const auto suite = failsafe::paper_suite(ScenarioConfig{});
  std::map<std::string, Run> runs;
  for (const auto & c : suite) {
    Run r;
    const auto t0 = std::chrono::steady_clock::now();
    r.trace = failsafe::run_scenario(c);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    runs.emplace(c.name, std::move(r));
  }
  const SimTrace & baseline = runs.at(suite.front().name).trace;
  for (auto & [name, r] : runs) {
    r.metrics = failsafe::compute_metrics(r.trace, &baseline);
  }
  return runs;
}

bool all_set(const MetricsReport & m)
{
  return m.stop_time && m.stop_distance && m.tv_gap_closing_time && m.e_tg_at_t_b;
}

void orderings(const std::map<std::string, Run> & runs)
{
  const auto & bil = runs.at("bil_nominal").metrics;
  const auto & bol = runs.at("bol_nominal").metrics;
  double slowest = 0.0;
  for (const auto & [name, r] : runs) {
    slowest = std::max(slowest, r.seconds);
  }
  bool ok = all_set(bil) && all_set(bol) && slowest <= 60.0;
  if (ok) {
    ok = *bil.stop_time < *bol.stop_time && *bil.stop_distance < *bol.stop_distance &&
         *bil.tv_gap_closing_time > *bol.tv_gap_closing_time &&
         *bil.e_tg_at_t_b > *bol.e_tg_at_t_b;
  }
  std::ostringstream d;
  d << "stop " << opt(bil.stop_time) << " < " << opt(bol.stop_time) << "; distance "
    << opt(bil.stop_distance) << " < " << opt(bol.stop_distance) << "; gap closing "
    << opt(bil.tv_gap_closing_time) << " > " << opt(bol.tv_gap_closing_time) << "; e_tg(t_b) "
    << opt(bil.e_tg_at_t_b) << " > " << opt(bol.e_tg_at_t_b) << "; slowest run "
    << fmt("%.1f", slowest) << " s";
  report(1, ok, "BIL/BOL orderings and runtime", d.str());
}

bool within(const std::optional<double> & v, double lo, double hi)
{
  return v && *v >= lo && *v <= hi;
}

void magnitudes(const std::map<std::string, Run> & runs)
{
  const auto & bil = runs.at("bil_nominal").metrics;
  const auto & bol = runs.at("bol_nominal").metrics;
  const bool ok = within(bil.stop_time, 5.7, 10.7) && within(bol.stop_time, 7.6, 14.1) &&
                  within(bil.stop_distance, 82.0, 153.0) &&
                  within(bol.stop_distance, 133.0, 248.0);
  std::ostringstream d;
  d << "BIL stop " << opt(bil.stop_time) << " s in [5.7, 10.7], BOL stop " << opt(bol.stop_time)
    << " s in [7.6, 14.1], BIL distance " << opt(bil.stop_distance)
    << " m in [82, 153], BOL distance " << opt(bol.stop_distance) << " m in [133, 248]";
  report(2, ok, "stop time and distance bands", d.str());
}

void stiffness_reconfiguration(const std::map<std::string, Run> & runs)
{
  const auto & plain = runs.at("bil_f2").metrics.max_d_y_error;
  const auto & reconf = runs.at("bil_f2_reconfigured").metrics.max_d_y_error;
  const bool measured = plain && reconf && *plain > 0.0;
  const bool ok = measured && *reconf <= 0.5 * *plain;
  const double reduction = measured ? 1.0 - *reconf / *plain : 0.0;
  report(3, ok, "rear-stiffness fault: reconfiguration halves lateral error",
         "max |d_y error| " + opt(plain) + " -> " + opt(reconf) + " m, reduction " +
           fmt("%.1f", 100.0 * reduction) + "%");
}

void steering_reconfiguration(const std::map<std::string, Run> & runs)
{
  const auto & plain = runs.at("bil_f1").metrics;
  const auto & reconf = runs.at("bil_f1_reconfigured").metrics;
  const bool ok = reconf.max_r_error && *reconf.max_r_error <= 0.001 && plain.max_d_y_error &&
                  reconf.max_d_y_error && *reconf.max_d_y_error < *plain.max_d_y_error;
  report(4, ok, "steering fault: reconfigured yaw-rate error and lateral error",
         "max |r error| " + opt(reconf.max_r_error) + " rad/s <= 0.001; max |d_y error| " +
           opt(reconf.max_d_y_error) + " < " + opt(plain.max_d_y_error) + " m");
}

void constraint_audit(const std::map<std::string, Run> & runs)
{
  constexpr double kTol = 1e-6;
  int violations = 0;
  double worst_delta = 0.0, worst_ay = 0.0;
  for (const auto & [name, r] : runs) {
    const auto & cfg = r.trace.controller_config;
    const auto & b = cfg.bounds;
    const auto & steps = r.trace.steps;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto & s = steps[i];
      for (const auto & u : s.inputs) {
        violations += u.a_x_c < b.a_x_c_min || u.a_x_c > b.a_x_c_max;
      }
      if (!s.solver_active) {
        continue;
      }
      const auto & u = s.inputs[failsafe::kFaulty];
      worst_delta = std::max(worst_delta, std::abs(u.delta) / b.delta_max);
      worst_ay = std::max(worst_ay, std::abs(s.a_y_model));
      violations += std::abs(u.delta) > b.delta_max + kTol;
      violations += std::abs(s.a_y_model) > b.a_y_max + cfg.slack_tolerance;
      if (i > 0) {
        const auto & p = steps[i - 1].inputs[failsafe::kFaulty];
        const double da = u.a_x_c - p.a_x_c, dd = u.delta - p.delta;
        violations += da < b.a_x_c_rate_min * cfg.dt - kTol * cfg.dt;
        violations += da > b.a_x_c_rate_max * cfg.dt + kTol * cfg.dt;
        violations += std::abs(dd) > b.delta_rate_max * cfg.dt + kTol * cfg.dt;
      }
    }
  }
  report(5, violations == 0, "constraint audit over the suite",
         std::to_string(violations) + " violations; worst |delta|/bound " +
           fmt("%.6f", worst_delta) + ", worst model |a_y| " + fmt("%.6f", worst_ay));
}

void numerical_suite()
{
  const double jac = failsafe::checks::jacobian_error(100, 2024);
  const double quintic = failsafe::checks::quintic_residual(100, 42);
  const auto grid = failsafe::checks::two_step_grid_search();
  const double eq = failsafe::checks::equilibrium_control_norm();
  const double pred = failsafe::checks::reconfigured_prediction_error();
  const bool grid_ok =
    grid.converged && grid.solver_cost <= grid.grid_cost + 1e-12 && grid.cells_away <= 1.0;
  const bool ok = jac <= 1e-6 && quintic <= 1e-9 && grid_ok && eq <= 1e-6 && pred <= 1e-10;
  std::ostringstream d;
  d << "Jacobian rel. error " << fmt("%.2e", jac) << ", quintic residual "
    << fmt("%.2e", quintic) << ", N=2 cost " << fmt("%.9g", grid.solver_cost) << " vs grid "
    << fmt("%.9g", grid.grid_cost) << " (" << fmt("%.2f", grid.cells_away)
    << " cells), equilibrium |u| " << fmt("%.2e", eq) << ", prediction error "
    << fmt("%.2e", pred);
  report(6, ok, "numerical verification", d.str());
}

void steady_state()
{
  ScenarioConfig c;
  c.inject_fault = false;
  c.duration = 10.0;
  const SimTrace t = failsafe::run_scenario(c);
  double worst = 0.0;
  for (const auto & s : t.steps) {
    // Each follower against the vehicle it currently tracks.
    const double tv = s.tv_target == failsafe::kFaulty ? s.e_tg_tv_fv : s.e_tg_tv_lv;
    worst = std::max({worst, std::abs(s.e_tg_fv_lv), std::abs(tv)});
  }
  report(7, worst <= 1e-3, "no-fault string holds the time gap",
         "max |e_tg| " + fmt("%.3e", worst) + " s over 10 s");
}

std::string serialize(const SimTrace & t)
{
  std::ostringstream os;
  failsafe::write_trace_csv(os, t);
  return os.str();
}

void determinism(const std::map<std::string, Run> & first)
{
  const auto second = run_suite();
  int differing = 0;
  for (const auto & [name, r] : first) {
    const SimTrace & other = second.at(name).trace;
    bool same = serialize(r.trace) == serialize(other) &&
                r.trace.steps.size() == other.steps.size();
    for (std::size_t i = 0; same && i < r.trace.steps.size(); ++i) {
      same = r.trace.steps[i].states == other.steps[i].states &&
             r.trace.steps[i].inputs == other.steps[i].inputs;
    }
    differing += same ? 0 : 1;
  }
  report(8, differing == 0, "repeated suite is bit-identical",
         std::to_string(differing) + " of " + std::to_string(first.size()) + " traces differ");
}

}  // namespace

int main()
{
  try {
    const auto runs = run_suite();
    orderings(runs);
    magnitudes(runs);
    stiffness_reconfiguration(runs);
    steering_reconfiguration(runs);
    constraint_audit(runs);
    numerical_suite();
    steady_state();
    determinism(runs);
  } catch (const std::exception & e) {
    std::printf("[FAIL] aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
