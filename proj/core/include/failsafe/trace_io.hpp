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

#ifndef FAILSAFE__TRACE_IO_HPP_
#define FAILSAFE__TRACE_IO_HPP_

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "failsafe/metrics.hpp"
#include "failsafe/scenario.hpp"

namespace failsafe
{

/// Long-format trace columns, one row per (step, vehicle). Controller and
/// decision-maker columns are blank on rows of vehicles other than the faulty one.
const std::vector<std::string> & trace_columns();

/// Wide-format plot columns, one row per step.
const std::vector<std::string> & plot_columns();

/// Columns of the metrics summary table.
const std::vector<std::string> & metrics_columns();

/// Floats use 17 significant digits; NaN is written as "nan".
std::string format_double(double value);

void write_trace_csv(std::ostream & os, const SimTrace & trace);
void write_plot_csv(std::ostream & os, const SimTrace & trace);
void write_error_csv(std::ostream & os, const ErrorSeries & errors);

struct NamedReport
{
  ScenarioConfig config;
  MetricsReport report;
  std::optional<double> t_a;
  std::optional<double> t_b;
};

/// Unset metrics are written as "unset" (CSV) and null (JSON).
void write_metrics_csv(std::ostream & os, const std::vector<NamedReport> & reports);
void write_metrics_json(std::ostream & os, const std::vector<NamedReport> & reports);

}  // namespace failsafe

#endif  // FAILSAFE__TRACE_IO_HPP_
