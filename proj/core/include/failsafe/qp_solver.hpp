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

#ifndef FAILSAFE__QP_SOLVER_HPP_
#define FAILSAFE__QP_SOLVER_HPP_

#include <Eigen/Core>

#include <vector>

namespace failsafe
{

enum class QpStatus { kOptimal, kInfeasible, kMaxIterations, kNotConvex };

/// Dense strictly convex QP
///
///   min  0.5 x' H x + g' x
///   s.t. C x >= d            (one row per constraint)
struct QpProblem
{
  Eigen::MatrixXd hessian;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd constraints;
  Eigen::VectorXd lower;
};

struct QpResult
{
  QpStatus status{QpStatus::kOptimal};
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;  // one per constraint row, >= 0
  std::vector<int> active_set;
  double objective{0.0};
  int iterations{0};
};

/// Goldfarb-Idnani dual active-set method. The Hessian must be positive
/// definite; the method starts from the unconstrained minimizer and adds the
/// most violated constraint per iteration.
class DualActiveSetQp
{
public:
  struct Options
  {
    int max_iterations{1000};
    double feasibility_tolerance{1e-10};
  };

  DualActiveSetQp() = default;
  explicit DualActiveSetQp(Options options) : options_(options) {}

  QpResult solve(const QpProblem & problem) const;

private:
  Options options_{};
};

}  // namespace failsafe

#endif  // FAILSAFE__QP_SOLVER_HPP_
