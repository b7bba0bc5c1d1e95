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

#include "failsafe/ocp_solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "failsafe/errors.hpp"
#include "failsafe/qp_solver.hpp"

namespace failsafe
{
namespace
{

using Vec7 = VehicleState::Vector;
using I = VehicleState::Index;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Iterate
{
  std::vector<Vec7> x;  // N + 1 shooting states
  Eigen::VectorXd u;    // 2 S blocked controls, (a_x_c, delta) interleaved
};

ControlInput control_of(const Eigen::VectorXd & u, int block)
{
  return {u(2 * block), u(2 * block + 1)};
}

// Row of the linearized constraint set tied to a shooting state, kept to
// recover the dynamics multipliers for the merit penalty.
struct StateRowInfo
{
  int row;
  int stage;
  Vec7 grad;
};

class SqpSolver
{
public:
  explicit SqpSolver(const Ocp & ocp)
  : ocp_(ocp),
    cfg_(ocp.config),
    n_(cfg_.horizon),
    s_(cfg_.control_horizon),
    nu_(2 * s_),
    act_(ActuationModel::first_order_lag(cfg_.actuation_tau, cfg_.dt)),
    opts_{cfg_.model_v_x_guard, false}
  {
  }

  OcpSolution run(const OcpSolution * warm)
  {
    Iterate it = initial_iterate(warm);
    OcpSolution sol;
    double mu = 0.0;
    bool converged = false;
    bool qp_failed = false;
    int iter = 0;

    for (; iter < cfg_.max_iterations; ++iter) {
      try {
        build_qp(it);
      } catch (const SingularVelocityError &) {
        qp_failed = true;
        break;
      }
      const QpResult qp = DualActiveSetQp().solve(qp_);
      if (qp.status != QpStatus::kOptimal) {
        qp_failed = true;
        break;
      }
      const Eigen::VectorXd dw = qp.x.head(nu_);
      const double kkt = (qp_.hessian.topLeftCorner(nu_, nu_) * dw).lpNorm<Eigen::Infinity>();
      sol.kkt_residual = kkt;
      sol.max_gap = max_gap_;
      if (kkt <= cfg_.kkt_tolerance && max_gap_ <= cfg_.gap_tolerance) {
        converged = true;
        if (sol.merit_history.empty()) {
          sol.merit_history.push_back(merit(it, mu).value);
        }
        break;
      }

      // Step in the shooting states implied by the condensed QP.
      std::vector<Vec7> dx(static_cast<std::size_t>(n_ + 1));
      for (int k = 0; k <= n_; ++k) {
        dx[static_cast<std::size_t>(k)] = phi_[static_cast<std::size_t>(k)] +
                                          gamma_[static_cast<std::size_t>(k)] * dw;
      }

      mu = std::max(mu, 1.1 * dynamics_multiplier_norm(it, dx, dw, qp) + 1e-3);
      const Merit m0 = merit(it, mu);
      if (sol.merit_history.empty()) {
        sol.merit_history.push_back(m0.value);
      }
      const double model_value = qp.objective + const_term_;
      const double predicted = std::max(m0.value - model_value, 0.0);

      double alpha = 1.0;
      bool accepted = false;
      Iterate trial;
      double trial_merit = kInf;
      while (alpha >= 1e-6) {
        trial = it;
        for (int k = 0; k <= n_; ++k) {
          trial.x[static_cast<std::size_t>(k)] += alpha * dx[static_cast<std::size_t>(k)];
        }
        trial.u += alpha * dw;
        trial_merit = merit(trial, mu).value;
        if (trial_merit <= m0.value - 1e-4 * alpha * predicted) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        break;
      }
      it = std::move(trial);
      sol.merit_history.push_back(trial_merit);
    }

    // Report the gap of the final iterate before replacing the states by an
    // exact rollout of the final controls.
    compute_gaps(it);
    sol.max_gap = max_gap_;
    sol.iterations = iter + (converged ? 1 : 0);
    finalize(it, sol);

    if (qp_failed) {
      sol.status = SolveStatus::kQpFailure;
    } else if (!converged) {
      sol.status = SolveStatus::kMaxIterations;
    } else if (sol.slack_used > cfg_.slack_tolerance) {
      sol.status = SolveStatus::kInfeasibleSoft;
    } else {
      sol.status = SolveStatus::kConverged;
    }
    return sol;
  }

  // Condensed QP objective at the exact rollout of the blocked controls u.
  Linearization linearize(const Eigen::VectorXd & u)
  {
    Iterate it;
    it.u = u;
    it.x = rollout(u);
    build_qp(it);
    return {
      qp_.hessian.topLeftCorner(nu_, nu_), qp_.gradient.head(nu_), total_cost(it), const_term_};
  }

private:
  struct Merit
  {
    double value;
  };

  Vec7 predict(const Vec7 & x, const ControlInput & u) const
  {
    return step_discrete(
             VehicleState::from_vector(x), u, cfg_.vehicle, cfg_.fault_assumed, act_, opts_)
      .to_vector();
  }

  std::vector<Vec7> rollout(const Eigen::VectorXd & u) const
  {
    std::vector<Vec7> x(static_cast<std::size_t>(n_ + 1));
    x[0] = ocp_.x_init.to_vector();
    for (int k = 0; k < n_; ++k) {
      x[static_cast<std::size_t>(k + 1)] =
        predict(x[static_cast<std::size_t>(k)], control_of(u, ocp_.block_of(k)));
    }
    return x;
  }

  Iterate initial_iterate(const OcpSolution * warm) const
  {
    Iterate it;
    if (warm != nullptr && static_cast<int>(warm->controls.size()) == n_ &&
        static_cast<int>(warm->predicted_states.size()) == n_ + 1)
    {
      it.u = Eigen::VectorXd::Zero(nu_);
      for (int b = 0; b < s_; ++b) {
        const auto & c = warm->controls[static_cast<std::size_t>(std::min(b + 1, n_ - 1))];
        it.u(2 * b) = c.a_x_c;
        it.u(2 * b + 1) = c.delta;
      }
      if (inputs_feasible(it.u)) {
        it.x.resize(static_cast<std::size_t>(n_ + 1));
        it.x[0] = ocp_.x_init.to_vector();
        try {
          for (int k = 1; k < n_; ++k) {
            it.x[static_cast<std::size_t>(k)] =
              warm->predicted_states[static_cast<std::size_t>(k + 1)].to_vector();
          }
          it.x[static_cast<std::size_t>(n_)] = predict(
            it.x[static_cast<std::size_t>(n_ - 1)], control_of(it.u, ocp_.block_of(n_ - 1)));
          return it;
        } catch (const SingularVelocityError &) {
        }
      }
    }
    // Cold start: hold the previous input, clipped to the box. The merit
    // function does not penalize the linear input constraints, so the SQP must
    // start from a point that satisfies them; every step then keeps them.
    const auto & b = cfg_.bounds;
    const double a = std::clamp(ocp_.previous_input.a_x_c, b.a_x_c_min, b.a_x_c_max);
    const double d = std::clamp(ocp_.previous_input.delta, -b.delta_max, b.delta_max);
    it.u = Eigen::VectorXd::Zero(nu_);
    for (int blk = 0; blk < s_; ++blk) {
      it.u(2 * blk) = a;
      it.u(2 * blk + 1) = d;
    }
    it.x = rollout(it.u);
    return it;
  }

  bool inputs_feasible(const Eigen::VectorXd & u) const
  {
    const auto & b = cfg_.bounds;
    const double tol = 1e-12;
    ControlInput prev = ocp_.previous_input;
    for (int blk = 0; blk < s_; ++blk) {
      const ControlInput c = control_of(u, blk);
      const double da = c.a_x_c - prev.a_x_c;
      if (c.a_x_c < b.a_x_c_min - tol || c.a_x_c > b.a_x_c_max + tol ||
          std::abs(c.delta) > b.delta_max + tol || da < b.a_x_c_rate_min * cfg_.dt - tol ||
          da > b.a_x_c_rate_max * cfg_.dt + tol ||
          std::abs(c.delta - prev.delta) > b.delta_rate_max * cfg_.dt + tol)
      {
        return false;
      }
      prev = c;
    }
    return true;
  }

  double total_cost(const Iterate & it) const
  {
    double cost = 0.0;
    for (int k = 0; k < n_; ++k) {
      cost += stage_cost(
        VehicleState::from_vector(it.x[static_cast<std::size_t>(k + 1)]),
        control_of(it.u, ocp_.block_of(k)), ocp_.refs[static_cast<std::size_t>(k)],
        cfg_.weights);
    }
    return cost;
  }

  // Largest violation of the softened constraints (v_x range, |a_y|).
  double soft_violation(const Iterate & it) const
  {
    const auto & b = cfg_.bounds;
    double viol = 0.0;
    for (int k = 0; k <= n_; ++k) {
      const Vec7 & x = it.x[static_cast<std::size_t>(k)];
      if (k >= 1) {
        viol = std::max({viol, b.v_x_min - x(I::kVx), x(I::kVx) - b.v_x_max});
      }
      if (k < n_) {
        const double ay = lateral_acceleration(
          VehicleState::from_vector(x), control_of(it.u, ocp_.block_of(k)).delta, cfg_.vehicle,
          cfg_.fault_assumed, cfg_.model_v_x_guard);
        viol = std::max(viol, std::abs(ay) - b.a_y_max);
      }
    }
    return viol;
  }

  void compute_gaps(const Iterate & it)
  {
    gaps_.resize(static_cast<std::size_t>(n_));
    max_gap_ = 0.0;
    gap_l1_ = 0.0;
    for (int k = 0; k < n_; ++k) {
      const Vec7 g = predict(it.x[static_cast<std::size_t>(k)], control_of(it.u, ocp_.block_of(k))) -
                     it.x[static_cast<std::size_t>(k + 1)];
      gaps_[static_cast<std::size_t>(k)] = g;
      max_gap_ = std::max(max_gap_, g.lpNorm<Eigen::Infinity>());
      gap_l1_ += g.lpNorm<1>();
    }
  }

  Merit merit(const Iterate & it, double mu)
  {
    try {
      compute_gaps(it);
      const double viol = std::max(soft_violation(it), 0.0);
      return {total_cost(it) + cfg_.slack_weight * viol * viol + mu * gap_l1_};
    } catch (const SingularVelocityError &) {
      return {kInf};
    }
  }

  void build_qp(const Iterate & it)
  {
    const auto & w = cfg_.weights;
    const auto & b = cfg_.bounds;
    const int nv = nu_ + 1;  // blocked controls + shared slack

    phi_.assign(static_cast<std::size_t>(n_ + 1), Vec7::Zero());
    gamma_.assign(static_cast<std::size_t>(n_ + 1), Eigen::MatrixXd::Zero(VehicleState::kSize, nu_));
    jac_a_.resize(static_cast<std::size_t>(n_));
    gaps_.resize(static_cast<std::size_t>(n_));
    max_gap_ = 0.0;

    phi_[0] = ocp_.x_init.to_vector() - it.x[0];
    for (int k = 0; k < n_; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const int blk = ocp_.block_of(k);
      const ControlInput u = control_of(it.u, blk);
      const VehicleState xs = VehicleState::from_vector(it.x[ku]);
      const auto jac =
        dynamics_jacobians(xs, u, cfg_.vehicle, cfg_.fault_assumed, act_, cfg_.model_v_x_guard);
      const Vec7 gap = predict(it.x[ku], u) - it.x[ku + 1];
      gaps_[ku] = gap;
      max_gap_ = std::max(max_gap_, gap.lpNorm<Eigen::Infinity>());
      jac_a_[ku] = jac.a;
      gamma_[ku + 1].noalias() = jac.a * gamma_[ku];
      gamma_[ku + 1].middleCols(2 * blk, 2) += jac.b;
      phi_[ku + 1] = jac.a * phi_[ku] + gap;
    }

    // Least-squares cost: tracked states at k + 1, inputs at k.
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(3 * n_, nu_);
    Eigen::VectorXd res(3 * n_);
    qp_.hessian = Eigen::MatrixXd::Zero(nv, nv);
    qp_.gradient = Eigen::VectorXd::Zero(nv);
    const_term_ = 0.0;
    const double sw[3] = {w.w_v_x, w.w_d_y, w.w_theta};
    const int sidx[3] = {I::kVx, I::kDy, I::kTheta};
    for (int k = 0; k < n_; ++k) {
      const auto k1 = static_cast<std::size_t>(k + 1);
      const auto & z = ocp_.refs[static_cast<std::size_t>(k)];
      const Vec7 xl = it.x[k1] + phi_[k1];
      const double err[3] = {xl(I::kVx) - z.z_v_x, xl(I::kDy) - z.z_d_y, xl(I::kTheta) - z.z_theta};
      for (int i = 0; i < 3; ++i) {
        const double scale = std::sqrt(2.0 * sw[i]);
        rows.row(3 * k + i) = scale * gamma_[k1].row(sidx[i]);
        res(3 * k + i) = scale * err[i];
        const_term_ += sw[i] * err[i] * err[i];
      }
      const int blk = ocp_.block_of(k);
      const ControlInput u = control_of(it.u, blk);
      qp_.hessian(2 * blk, 2 * blk) += 2.0 * w.w_a_x;
      qp_.hessian(2 * blk + 1, 2 * blk + 1) += 2.0 * w.w_delta;
      qp_.gradient(2 * blk) += 2.0 * w.w_a_x * u.a_x_c;
      qp_.gradient(2 * blk + 1) += 2.0 * w.w_delta * u.delta;
      const_term_ += w.w_a_x * u.a_x_c * u.a_x_c + w.w_delta * u.delta * u.delta;
    }
    qp_.hessian.topLeftCorner(nu_, nu_).noalias() += rows.transpose() * rows;
    qp_.gradient.head(nu_).noalias() += rows.transpose() * res;
    qp_.hessian(nu_, nu_) = 2.0 * cfg_.slack_weight;

    // Constraints C [dw; s] >= d.
    const int m = 4 * s_ + 4 * s_ + 2 * n_ + 2 * n_ + 2 * n_ + 1;
    qp_.constraints = Eigen::MatrixXd::Zero(m, nv);
    qp_.lower = Eigen::VectorXd::Zero(m);
    state_rows_.clear();
    int row = 0;
    auto add_row = [&](double lower) {
      qp_.lower(row) = lower;
      return row++;
    };

    // Input box.
    for (int blk = 0; blk < s_; ++blk) {
      const ControlInput u = control_of(it.u, blk);
      qp_.constraints(row, 2 * blk) = 1.0;
      add_row(b.a_x_c_min - u.a_x_c);
      qp_.constraints(row, 2 * blk) = -1.0;
      add_row(u.a_x_c - b.a_x_c_max);
      qp_.constraints(row, 2 * blk + 1) = 1.0;
      add_row(-b.delta_max - u.delta);
      qp_.constraints(row, 2 * blk + 1) = -1.0;
      add_row(u.delta - b.delta_max);
    }

    // Input rate; block 0 is compared with the previously applied input.
    const double dt = cfg_.dt;
    for (int blk = 0; blk < s_; ++blk) {
      const ControlInput u = control_of(it.u, blk);
      const ControlInput prev = blk == 0 ? ocp_.previous_input : control_of(it.u, blk - 1);
      const double da = u.a_x_c - prev.a_x_c;
      const double dd = u.delta - prev.delta;
      auto rate_row = [&](int col, double sign) {
        qp_.constraints(row, col) = sign;
        if (blk > 0) {
          qp_.constraints(row, col - 2) = -sign;
        }
      };
      rate_row(2 * blk, 1.0);
      add_row(b.a_x_c_rate_min * dt - da);
      rate_row(2 * blk, -1.0);
      add_row(da - b.a_x_c_rate_max * dt);
      rate_row(2 * blk + 1, 1.0);
      add_row(-b.delta_rate_max * dt - dd);
      rate_row(2 * blk + 1, -1.0);
      add_row(dd - b.delta_rate_max * dt);
    }

    // State bounds at k = 1..N: a_x hard, v_x soft.
    for (int k = 1; k <= n_; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const Vec7 xl = it.x[ku] + phi_[ku];
      const auto g_ax = gamma_[ku].row(I::kAx);
      const auto g_vx = gamma_[ku].row(I::kVx);

      qp_.constraints.row(row).head(nu_) = g_ax;
      state_rows_.push_back({row, k, Vec7::Unit(I::kAx)});
      add_row(b.a_x_min - xl(I::kAx));
      qp_.constraints.row(row).head(nu_) = -g_ax;
      state_rows_.push_back({row, k, -Vec7::Unit(I::kAx)});
      add_row(xl(I::kAx) - b.a_x_max);

      qp_.constraints.row(row).head(nu_) = g_vx;
      qp_.constraints(row, nu_) = 1.0;
      state_rows_.push_back({row, k, Vec7::Unit(I::kVx)});
      add_row(b.v_x_min - xl(I::kVx));
      qp_.constraints.row(row).head(nu_) = -g_vx;
      qp_.constraints(row, nu_) = 1.0;
      state_rows_.push_back({row, k, -Vec7::Unit(I::kVx)});
      add_row(xl(I::kVx) - b.v_x_max);
    }

    // |a_y| <= a_y_max + s at k = 0..N-1, linearized about the shooting states.
    for (int k = 0; k < n_; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const int blk = ocp_.block_of(k);
      const ControlInput u = control_of(it.u, blk);
      const VehicleState xs = VehicleState::from_vector(it.x[ku]);
      const double ay = lateral_acceleration(
        xs, u.delta, cfg_.vehicle, cfg_.fault_assumed, cfg_.model_v_x_guard);
      const Eigen::Vector4d g = lateral_acceleration_gradient(
        xs, u.delta, cfg_.vehicle, cfg_.fault_assumed, cfg_.model_v_x_guard);
      Vec7 gx = Vec7::Zero();
      gx(I::kVx) = g(0);
      gx(I::kVy) = g(1);
      gx(I::kR) = g(2);
      Eigen::RowVectorXd lin = gx.transpose() * gamma_[ku];
      lin(2 * blk + 1) += g(3);
      const double val = ay + gx.dot(phi_[ku]);

      qp_.constraints.row(row).head(nu_) = lin;
      qp_.constraints(row, nu_) = 1.0;
      if (k >= 1) {
        state_rows_.push_back({row, k, gx});
      }
      add_row(-b.a_y_max - val);
      qp_.constraints.row(row).head(nu_) = -lin;
      qp_.constraints(row, nu_) = 1.0;
      if (k >= 1) {
        state_rows_.push_back({row, k, -gx});
      }
      add_row(val - b.a_y_max);
    }

    qp_.constraints(row, nu_) = 1.0;
    add_row(0.0);
  }

  // Infinity norm of the dynamics multipliers of the uncondensed QP,
  // recovered by the adjoint recursion over the shooting states.
  double dynamics_multiplier_norm(
    const Iterate & it, const std::vector<Vec7> & dx, const Eigen::VectorXd & dw,
    const QpResult & qp) const
  {
    (void)dw;
    const auto & w = cfg_.weights;
    std::vector<Vec7> state_grad(static_cast<std::size_t>(n_ + 1), Vec7::Zero());
    for (int k = 1; k <= n_; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const auto & z = ocp_.refs[ku - 1];
      const Vec7 xn = it.x[ku] + dx[ku];
      Vec7 & g = state_grad[ku];
      g(I::kVx) += 2.0 * w.w_v_x * (xn(I::kVx) - z.z_v_x);
      g(I::kDy) += 2.0 * w.w_d_y * (xn(I::kDy) - z.z_d_y);
      g(I::kTheta) += 2.0 * w.w_theta * (xn(I::kTheta) - z.z_theta);
    }
    for (const auto & info : state_rows_) {
      state_grad[static_cast<std::size_t>(info.stage)] -= qp.multipliers(info.row) * info.grad;
    }
    double norm = 0.0;
    Vec7 lambda = Vec7::Zero();
    for (int k = n_; k >= 1; --k) {
      const auto ku = static_cast<std::size_t>(k);
      Vec7 next = state_grad[ku];
      if (k < n_) {
        next += jac_a_[ku].transpose() * lambda;
      }
      lambda = next;
      norm = std::max(norm, lambda.lpNorm<Eigen::Infinity>());
    }
    return norm;
  }

  void finalize(const Iterate & it, OcpSolution & sol) const
  {
    const auto & b = cfg_.bounds;
    Iterate out = it;
    // Box projection removes round-off of the QP; rates are untouched in practice.
    for (int blk = 0; blk < s_; ++blk) {
      out.u(2 * blk) = std::clamp(out.u(2 * blk), b.a_x_c_min, b.a_x_c_max);
      out.u(2 * blk + 1) = std::clamp(out.u(2 * blk + 1), -b.delta_max, b.delta_max);
    }
    try {
      out.x = rollout(out.u);
    } catch (const SingularVelocityError &) {
      out.x = it.x;
    }
    sol.controls.resize(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k) {
      sol.controls[static_cast<std::size_t>(k)] = control_of(out.u, ocp_.block_of(k));
    }
    sol.predicted_states.resize(static_cast<std::size_t>(n_ + 1));
    for (int k = 0; k <= n_; ++k) {
      sol.predicted_states[static_cast<std::size_t>(k)] =
        VehicleState::from_vector(out.x[static_cast<std::size_t>(k)]);
    }
    sol.cost = total_cost(out);
    try {
      sol.slack_used = std::max(soft_violation(out), 0.0);
    } catch (const SingularVelocityError &) {
      sol.slack_used = kInf;
    }
  }

  const Ocp & ocp_;
  const OcpConfig & cfg_;
  const int n_;
  const int s_;
  const int nu_;
  const ActuationModel act_;
  const StepOptions opts_;

  QpProblem qp_;
  double const_term_{0.0};
  std::vector<Vec7> phi_;
  std::vector<Eigen::MatrixXd> gamma_;
  std::vector<StateJacobian> jac_a_;
  std::vector<Vec7> gaps_;
  std::vector<StateRowInfo> state_rows_;
  double max_gap_{0.0};
  double gap_l1_{0.0};
};

}  // namespace

Linearization linearize(const Ocp & ocp, const Eigen::VectorXd & blocked_controls)
{
  if (blocked_controls.size() != ocp.num_control_variables()) {
    throw InvalidArgumentError("linearize: expected 2 S blocked controls");
  }
  return SqpSolver(ocp).linearize(blocked_controls);
}

std::string_view to_string(SolveStatus status)
{
  switch (status) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kMaxIterations:
      return "max_iter";
    case SolveStatus::kInfeasibleSoft:
      return "infeasible_soft";
    case SolveStatus::kQpFailure:
      return "qp_failure";
  }
  return "unknown";
}

double stage_cost(
  const VehicleState & x, const ControlInput & u, const ReferencePoint & z,
  const CostWeights & weights)
{
  const double ev = z.z_v_x - x.v_x;
  const double ey = z.z_d_y - x.d_y;
  const double et = z.z_theta - x.theta;
  return weights.w_v_x * ev * ev + weights.w_d_y * ey * ey + weights.w_theta * et * et +
         weights.w_a_x * u.a_x_c * u.a_x_c + weights.w_delta * u.delta * u.delta;
}

OcpConfig reconfigure(const OcpConfig & config, const FaultVector & fault_known)
{
  if (!(fault_known.f1 > 0.0) || !(fault_known.f2 > 0.0) || fault_known.f1 > 1.0 ||
      fault_known.f2 > 1.0)
  {
    throw InvalidArgumentError("fault multipliers must lie in (0, 1]");
  }
  OcpConfig out = config;
  out.fault_assumed = fault_known;
  out.bounds.delta_max = config.bounds.delta_max / fault_known.f1;
  out.bounds.delta_rate_max = config.bounds.delta_rate_max / fault_known.f1;
  // Penalize the road-wheel angle f1 * delta rather than the command.
  out.weights.w_delta = config.weights.w_delta * fault_known.f1 * fault_known.f1;
  return out;
}

void validate(const OcpConfig & c)
{
  auto fail = [](const std::string & what) { throw InvalidArgumentError("ocp config: " + what); };
  if (c.horizon < 1) {
    fail("horizon must be >= 1");
  }
  if (c.control_horizon < 1 || c.control_horizon > c.horizon) {
    fail("control horizon must lie in [1, horizon]");
  }
  if (!(c.dt > 0.0)) {
    fail("dt must be > 0");
  }
  if (!(c.actuation_tau >= c.dt)) {
    fail("actuation tau must be >= dt");
  }
  const auto & w = c.weights;
  if (w.w_v_x < 0.0 || w.w_d_y < 0.0 || w.w_theta < 0.0 || !(w.w_a_x > 0.0) ||
      !(w.w_delta > 0.0))
  {
    fail("weights must be non-negative, input weights positive");
  }
  const auto & b = c.bounds;
  if (!(b.delta_max > 0.0) || !(b.delta_rate_max > 0.0) || !(b.a_y_max > 0.0)) {
    fail("symmetric bounds must be positive");
  }
  if (!(b.a_x_min < b.a_x_max) || !(b.a_x_c_min < b.a_x_c_max) ||
      !(b.a_x_c_rate_min < b.a_x_c_rate_max) || !(b.v_x_min < b.v_x_max))
  {
    fail("bounds must be ordered min < max");
  }
  if (!(c.slack_weight > 0.0) || c.max_iterations < 1) {
    fail("slack weight and iteration cap must be positive");
  }
  if (!(c.model_v_x_guard > 0.0) || c.model_v_x_guard > b.v_x_min) {
    fail("model guard must lie in (0, v_x_min]");
  }
}

Ocp build_ocp(
  const VehicleState & x_init, std::vector<ReferencePoint> refs, const OcpConfig & config,
  const ControlInput & previous_input)
{
  validate(config);
  if (static_cast<int>(refs.size()) != config.horizon) {
    throw InvalidArgumentError(
      "reference length " + std::to_string(refs.size()) + " does not match horizon " +
      std::to_string(config.horizon));
  }
  if (!x_init.is_finite()) {
    throw InvalidArgumentError("initial state is not finite");
  }
  if (x_init.v_x < config.bounds.v_x_min - 1e-9) {
    throw SingularVelocityError("initial state below the v_x bound");
  }
  Ocp ocp;
  ocp.x_init = x_init;
  ocp.refs = std::move(refs);
  ocp.config = config;
  ocp.previous_input = previous_input;
  return ocp;
}

OcpSolution solve(const Ocp & ocp, const OcpSolution * warm_start)
{
  SqpSolver solver(ocp);
  return solver.run(warm_start);
}

VehicleState predict_step(const VehicleState & x, const ControlInput & u, const OcpConfig & config)
{
  const auto act = ActuationModel::first_order_lag(config.actuation_tau, config.dt);
  return step_discrete(
    x, u, config.vehicle, config.fault_assumed, act, StepOptions{config.model_v_x_guard, false});
}

std::pair<ControlInput, OcpSolution> mpc_step(
  MpcControllerState & state, const VehicleState & measured,
  std::vector<ReferencePoint> refs, const OcpConfig & config)
{
  const Ocp ocp = build_ocp(measured, std::move(refs), config, state.previous_input);
  OcpSolution sol =
    solve(ocp, state.last_solution.has_value() ? &state.last_solution.value() : nullptr);
  const ControlInput applied = sol.controls.front();
  state.previous_input = applied;
  state.last_solution = sol;
  return {applied, std::move(sol)};
}

}  // namespace failsafe
