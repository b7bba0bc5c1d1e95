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

#include "failsafe/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "failsafe/errors.hpp"

namespace failsafe
{
namespace
{

// Index of the first sample with t >= t0 (within half a sample of round-off).
std::size_t first_at_or_after(std::span<const double> t, double t0)
{
  const auto it = std::lower_bound(t.begin(), t.end(), t0 - 1e-9);
  return static_cast<std::size_t>(it - t.begin());
}

template <typename F>
std::vector<double> column(const SimTrace & trace, F && f)
{
  std::vector<double> out;
  out.reserve(trace.steps.size());
  for (const auto & s : trace.steps) {
    out.push_back(f(s));
  }
  return out;
}

}  // namespace

std::optional<StopMetrics> stop_metrics(
  std::span<const double> t, std::span<const double> v_x, std::span<const double> d_y,
  std::span<const double> d_x, double t_a, double goal_velocity, double goal_d_y,
  const MetricThresholds & th)
{
  const std::size_t n = t.size();
  if (v_x.size() != n || d_y.size() != n || d_x.size() != n) {
    throw InvalidArgumentError("stop_metrics: series lengths differ");
  }
  const std::size_t start = first_at_or_after(t, t_a);
  if (start >= n) {
    return std::nullopt;
  }
  auto holds = [&](std::size_t i) {
    return std::abs(v_x[i] - goal_velocity) <= th.stop_velocity &&
           std::abs(d_y[i] - goal_d_y) <= th.stop_lateral;
  };
  // Walk back from the end while the goals hold.
  std::size_t first = n;
  for (std::size_t i = n; i-- > start;) {
    if (!holds(i)) {
      break;
    }
    first = i;
  }
  if (first == n) {
    return std::nullopt;
  }
  return StopMetrics{t[first] - t[start], d_x[first] - d_x[start]};
}

std::optional<StopMetrics> stop_metrics(const SimTrace & trace, const MetricThresholds & th)
{
  if (!trace.t_a.has_value()) {
    return std::nullopt;
  }
  const auto t = column(trace, [](const StepRecord & s) { return s.t; });
  const auto v = column(trace, [](const StepRecord & s) { return s.states[kFaulty].v_x; });
  const auto y = column(trace, [](const StepRecord & s) { return s.states[kFaulty].d_y; });
  const auto x = column(trace, [](const StepRecord & s) { return s.states[kFaulty].d_x; });
  return stop_metrics(
    t, v, y, x, *trace.t_a, trace.config.ocp.bounds.v_x_min, trace.config.lane.shoulder_offset,
    th);
}

std::optional<GapClosingMetrics> gap_closing_metrics(
  std::span<const double> t, std::span<const double> e_tg, double t_b,
  const MetricThresholds & th)
{
  const std::size_t n = t.size();
  if (e_tg.size() != n) {
    throw InvalidArgumentError("gap_closing_metrics: series lengths differ");
  }
  const std::size_t start = first_at_or_after(t, t_b);
  if (start >= n) {
    return std::nullopt;
  }
  std::size_t open = n;
  for (std::size_t i = start; i < n; ++i) {
    if (std::abs(e_tg[i]) > th.gap_open) {
      open = i;
      break;
    }
  }
  if (open == n) {
    return std::nullopt;
  }
  GapClosingMetrics m;
  m.e_tg_at_t_b = std::abs(e_tg[start]);
  std::size_t closed = n;
  for (std::size_t i = n; i-- > open;) {
    if (!(std::abs(e_tg[i]) < th.gap_closed)) {
      break;
    }
    closed = i;
  }
  if (closed < n) {
    m.closing_time = t[closed] - t[open];
  }
  return m;
}

std::optional<GapClosingMetrics> gap_closing_metrics(
  const SimTrace & trace, const MetricThresholds & th)
{
  if (!trace.t_b.has_value()) {
    return std::nullopt;
  }
  const auto t = column(trace, [](const StepRecord & s) { return s.t; });
  const auto e = column(trace, [](const StepRecord & s) { return s.e_tg_tv_lv; });
  return gap_closing_metrics(t, e, *trace.t_b, th);
}

ErrorSeries error_metrics(const SimTrace & trace, const SimTrace & baseline)
{
  if (trace.steps.size() != baseline.steps.size()) {
    throw InvalidArgumentError("error_metrics: traces differ in length");
  }
  ErrorSeries e;
  const std::size_t n = trace.steps.size();
  e.t.reserve(n);
  e.delta.reserve(n);
  e.d_y.reserve(n);
  e.r.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto & a = trace.steps[i];
    const auto & b = baseline.steps[i];
    if (std::abs(a.t - b.t) > 1e-9) {
      throw InvalidArgumentError("error_metrics: time bases differ");
    }
    e.t.push_back(a.t);
    e.delta.push_back(a.inputs[kFaulty].delta - b.inputs[kFaulty].delta);
    e.d_y.push_back(a.states[kFaulty].d_y - b.states[kFaulty].d_y);
    e.r.push_back(a.states[kFaulty].r - b.states[kFaulty].r);
    e.max_abs_delta = std::max(e.max_abs_delta, std::abs(e.delta.back()));
    e.max_abs_d_y = std::max(e.max_abs_d_y, std::abs(e.d_y.back()));
    e.max_abs_r = std::max(e.max_abs_r, std::abs(e.r.back()));
  }
  return e;
}

MetricsReport compute_metrics(
  const SimTrace & trace, const SimTrace * baseline, const MetricThresholds & th)
{
  MetricsReport r;
  if (const auto s = stop_metrics(trace, th)) {
    r.stop_time = s->stop_time;
    r.stop_distance = s->stop_distance;
  }
  if (const auto g = gap_closing_metrics(trace, th)) {
    r.tv_gap_closing_time = g->closing_time;
    r.e_tg_at_t_b = g->e_tg_at_t_b;
  }
  if (baseline != nullptr) {
    const auto e = error_metrics(trace, *baseline);
    r.max_d_y_error = e.max_abs_d_y;
    r.max_r_error = e.max_abs_r;
  }
  double max_delta = 0.0;
  for (const auto & s : trace.steps) {
    max_delta = std::max(max_delta, std::abs(s.inputs[kFaulty].delta));
  }
  r.max_delta = max_delta;
  return r;
}

}  // namespace failsafe
