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

#include "failsafe/qp_solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "failsafe/errors.hpp"

namespace failsafe
{
namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTiny = 1e-14;

// Active-set factorization J = L^-T Q, R upper triangular with N* = Q [R; 0].
struct Factorization
{
  Eigen::MatrixXd j;
  Eigen::MatrixXd r;
  int iq{0};

  // Appends the constraint whose transformed normal is d = J' n.
  bool add(Eigen::VectorXd & d)
  {
    const Eigen::Index n = j.rows();
    for (Eigen::Index col = n - 1; col > iq; --col) {
      double cc = d(col - 1);
      double ss = d(col);
      const double h = std::hypot(cc, ss);
      if (h == 0.0) {
        continue;
      }
      d(col) = 0.0;
      cc /= h;
      ss /= h;
      if (cc < 0.0) {
        cc = -cc;
        ss = -ss;
        d(col - 1) = -h;
      } else {
        d(col - 1) = h;
      }
      const double xny = ss / (1.0 + cc);
      for (Eigen::Index k = 0; k < n; ++k) {
        const double t1 = j(k, col - 1);
        const double t2 = j(k, col);
        j(k, col - 1) = t1 * cc + t2 * ss;
        j(k, col) = xny * (t1 + j(k, col - 1)) - t2;
      }
    }
    ++iq;
    r.col(iq - 1).head(iq) = d.head(iq);
    return std::abs(d(iq - 1)) > kTiny;
  }

  // Removes the active constraint at position pos and re-triangularizes R.
  void remove(int pos)
  {
    const Eigen::Index n = j.rows();
    for (int col = pos; col < iq - 1; ++col) {
      r.col(col) = r.col(col + 1);
    }
    --iq;
    r.col(iq).setZero();
    for (int col = pos; col < iq; ++col) {
      double cc = r(col, col);
      double ss = r(col + 1, col);
      const double h = std::hypot(cc, ss);
      if (h == 0.0) {
        continue;
      }
      cc /= h;
      ss /= h;
      r(col + 1, col) = 0.0;
      if (cc < 0.0) {
        r(col, col) = -h;
        cc = -cc;
        ss = -ss;
      } else {
        r(col, col) = h;
      }
      const double xny = ss / (1.0 + cc);
      for (int k = col + 1; k < iq; ++k) {
        const double t1 = r(col, k);
        const double t2 = r(col + 1, k);
        r(col, k) = t1 * cc + t2 * ss;
        r(col + 1, k) = xny * (t1 + r(col, k)) - t2;
      }
      for (Eigen::Index k = 0; k < n; ++k) {
        const double t1 = j(k, col);
        const double t2 = j(k, col + 1);
        j(k, col) = t1 * cc + t2 * ss;
        j(k, col + 1) = xny * (j(k, col) + t1) - t2;
      }
    }
  }
};

}  // namespace

QpResult DualActiveSetQp::solve(const QpProblem & problem) const
{
  const Eigen::Index n = problem.hessian.rows();
  const Eigen::Index m = problem.constraints.rows();
  if (problem.hessian.cols() != n || problem.gradient.size() != n ||
      (m > 0 && problem.constraints.cols() != n) || problem.lower.size() != m)
  {
    throw InvalidArgumentError("QP dimension mismatch");
  }

  QpResult result;
  result.multipliers = Eigen::VectorXd::Zero(m);

  // Unit-norm rows keep the violation test scale free.
  Eigen::MatrixXd c = problem.constraints;
  Eigen::VectorXd d = problem.lower;
  Eigen::VectorXd norms(m);
  std::vector<bool> usable(static_cast<std::size_t>(m), true);
  for (Eigen::Index i = 0; i < m; ++i) {
    norms(i) = c.row(i).norm();
    if (norms(i) <= kTiny) {
      usable[static_cast<std::size_t>(i)] = false;
      if (d(i) > options_.feasibility_tolerance) {
        result.status = QpStatus::kInfeasible;
        result.x = Eigen::VectorXd::Zero(n);
        return result;
      }
      continue;
    }
    c.row(i) /= norms(i);
    d(i) /= norms(i);
  }

  const Eigen::LLT<Eigen::MatrixXd> llt(problem.hessian);
  if (llt.info() != Eigen::Success) {
    result.status = QpStatus::kNotConvex;
    result.x = Eigen::VectorXd::Zero(n);
    return result;
  }

  Factorization f;
  f.j = llt.matrixU().solve(Eigen::MatrixXd::Identity(n, n));
  f.r = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd x = -llt.solve(problem.gradient);

  std::vector<int> active;
  std::vector<double> u;
  std::vector<bool> is_active(static_cast<std::size_t>(m), false);

  auto finish = [&](QpStatus status) {
    result.status = status;
    result.x = x;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const int idx = active[k];
      result.multipliers(idx) = u[k] / norms(idx);
    }
    result.active_set = active;
    result.objective = 0.5 * x.dot(problem.hessian * x) + problem.gradient.dot(x);
    return result;
  };

  Eigen::VectorXd dvec(n);
  Eigen::VectorXd z(n);
  Eigen::VectorXd rvec;
  int iterations = 0;

  while (true) {
    // Most violated inactive constraint.
    int p = -1;
    double worst = -options_.feasibility_tolerance;
    if (m > 0) {
      const Eigen::VectorXd slack = c * x - d;
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (!usable[ui] || is_active[ui]) {
          continue;
        }
        if (slack(i) < worst) {
          worst = slack(i);
          p = static_cast<int>(i);
        }
      }
    }
    if (p < 0) {
      result.iterations = iterations;
      return finish(QpStatus::kOptimal);
    }

    const Eigen::VectorXd np = c.row(p).transpose();
    double u_p = 0.0;

    while (true) {
      if (++iterations > options_.max_iterations) {
        result.iterations = iterations;
        return finish(QpStatus::kMaxIterations);
      }
      const int iq = f.iq;
      dvec.noalias() = f.j.transpose() * np;
      z.noalias() = f.j.rightCols(n - iq) * dvec.tail(n - iq);
      rvec = f.r.topLeftCorner(iq, iq).triangularView<Eigen::Upper>().solve(dvec.head(iq));

      // Partial (dual) step length.
      double t1 = kInf;
      int drop = -1;
      for (int k = 0; k < iq; ++k) {
        if (rvec(k) > kTiny) {
          const double t = u[static_cast<std::size_t>(k)] / rvec(k);
          if (t < t1) {
            t1 = t;
            drop = k;
          }
        }
      }
      // Full (primal) step length.
      const double zn = z.dot(np);
      const double t2 = std::abs(zn) <= 1e-13 ? kInf : -(np.dot(x) - d(p)) / zn;

      if (t1 == kInf && t2 == kInf) {
        result.iterations = iterations;
        return finish(QpStatus::kInfeasible);
      }
      if (t2 == kInf) {
        for (int k = 0; k < iq; ++k) {
          u[static_cast<std::size_t>(k)] -= t1 * rvec(k);
        }
        u_p += t1;
        is_active[static_cast<std::size_t>(active[static_cast<std::size_t>(drop)])] = false;
        active.erase(active.begin() + drop);
        u.erase(u.begin() + drop);
        f.remove(drop);
        continue;
      }

      const double t = std::min(t1, t2);
      x += t * z;
      for (int k = 0; k < iq; ++k) {
        u[static_cast<std::size_t>(k)] -= t * rvec(k);
      }
      u_p += t;

      if (t2 <= t1) {
        if (!f.add(dvec)) {
          // Numerically dependent on the active set; treat as satisfied.
          f.remove(f.iq - 1);
          usable[static_cast<std::size_t>(p)] = false;
          break;
        }
        active.push_back(p);
        u.push_back(u_p);
        is_active[static_cast<std::size_t>(p)] = true;
        break;
      }
      is_active[static_cast<std::size_t>(active[static_cast<std::size_t>(drop)])] = false;
      active.erase(active.begin() + drop);
      u.erase(u.begin() + drop);
      f.remove(drop);
    }
  }
}

}  // namespace failsafe
