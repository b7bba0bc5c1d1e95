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

#ifndef FAILSAFE__METRICS_HPP_
#define FAILSAFE__METRICS_HPP_

#include <optional>
#include <span>
#include <vector>

#include "failsafe/scenario.hpp"

namespace failsafe
{

struct StopMetrics
{
  double stop_time{0.0};      // [s] after t_a
  double stop_distance{0.0};  // [m] travelled since t_a
};

struct GapClosingMetrics
{
  std::optional<double> closing_time;  // unset if |e_tg| never settles
  double e_tg_at_t_b{0.0};             // |e_tg| at t_b
};

struct ErrorSeries
{
  std::vector<double> t;
  std::vector<double> delta;
  std::vector<double> d_y;
  std::vector<double> r;
  double max_abs_delta{0.0};
  double max_abs_d_y{0.0};
  double max_abs_r{0.0};
};

/// Unset metrics are those whose trigger never fired.
struct MetricsReport
{
  std::optional<double> stop_time;
  std::optional<double> stop_distance;
  std::optional<double> tv_gap_closing_time;
  std::optional<double> e_tg_at_t_b;
  std::optional<double> max_d_y_error;
  std::optional<double> max_r_error;
  std::optional<double> max_delta;
};

/// Thresholds of the stop and gap-closing definitions.
struct MetricThresholds
{
  double stop_velocity{0.01};  // [m/s]
  double stop_lateral{0.001};  // [m]
  double gap_open{0.4};        // [s]
  double gap_closed{0.01};     // [s]
};

/// First sample at or after t_a from which the velocity and lateral goals are
/// met until the end of the series.
std::optional<StopMetrics> stop_metrics(
  std::span<const double> t, std::span<const double> v_x, std::span<const double> d_y,
  std::span<const double> d_x, double t_a, double goal_velocity, double goal_d_y,
  const MetricThresholds & th = {});

std::optional<StopMetrics> stop_metrics(const SimTrace & trace, const MetricThresholds & th = {});

/// Time from the first |e_tg| > gap_open at or after t_b to the instant from
/// which |e_tg| < gap_closed holds to the end. Unset when |e_tg| never exceeds
/// gap_open.
std::optional<GapClosingMetrics> gap_closing_metrics(
  std::span<const double> t, std::span<const double> e_tg, double t_b,
  const MetricThresholds & th = {});

/// Evaluated on the trailing-to-lead time-gap error.
std::optional<GapClosingMetrics> gap_closing_metrics(
  const SimTrace & trace, const MetricThresholds & th = {});

/// Faulty-vehicle differences trace - baseline for delta, d_y and r.
/// Throws InvalidArgumentError if the time bases differ.
ErrorSeries error_metrics(const SimTrace & trace, const SimTrace & baseline);

MetricsReport compute_metrics(
  const SimTrace & trace, const SimTrace * baseline = nullptr, const MetricThresholds & th = {});

}  // namespace failsafe

#endif  // FAILSAFE__METRICS_HPP_
