#include "tadpole/least_squares.hpp"

#include <cmath>
#include <limits>

namespace tadpole::lsq {

namespace {

void numeric_jacobian(const Problem& p, const Eigen::VectorXd& x, Eigen::MatrixXd& jac) {
  const Eigen::Index n = x.size();
  jac.resize(p.residual_count, n);
  Eigen::VectorXd xp = x, xm = x, rp(p.residual_count), rm(p.residual_count);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = 1e-7 * std::max(std::abs(x[j]), 1e-8);
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    p.residuals(xp, rp);
    p.residuals(xm, rm);
    jac.col(j) = (rp - rm) / (xp[j] - xm[j]);
    xp[j] = xm[j] = x[j];
  }
}

}  // namespace

Result levenberg_marquardt(const Problem& problem, Eigen::VectorXd x0, const Options& options) {
  const Eigen::Index m = problem.residual_count;
  const Eigen::Index n = x0.size();
  auto eval_jac = [&](const Eigen::VectorXd& x, Eigen::MatrixXd& jac) {
    if (problem.jacobian) {
      jac.resize(m, n);
      problem.jacobian(x, jac);
    } else {
      numeric_jacobian(problem, x, jac);
    }
  };

  Result res;
  res.x = std::move(x0);
  Eigen::VectorXd r(m), r_trial(m);
  problem.residuals(res.x, r);
  res.cost = r.squaredNorm();
  if (!std::isfinite(res.cost)) return res;

  Eigen::MatrixXd jac;
  eval_jac(res.x, jac);
  Eigen::VectorXd scale = Eigen::VectorXd::Zero(n);
  double lambda = options.initial_damping;

  Eigen::MatrixXd aug(m + n, n);
  Eigen::VectorXd rhs(m + n);
  while (res.iterations < options.max_iterations) {
    if (res.cost == 0.0) {
      res.converged = true;
      break;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      scale[j] = std::max(scale[j], jac.col(j).norm());
      if (scale[j] == 0.0) scale[j] = 1.0;
    }
    ++res.iterations;

    bool accepted = false;
    bool stalled = false;
    while (!accepted) {
      aug.topRows(m) = jac;
      aug.bottomRows(n) = (std::sqrt(lambda) * scale).asDiagonal();
      rhs.head(m) = -r;
      rhs.tail(n).setZero();
      const Eigen::VectorXd step = aug.colPivHouseholderQr().solve(rhs);
      const Eigen::VectorXd x_trial = res.x + step;
      problem.residuals(x_trial, r_trial);
      const double cost_trial = r_trial.squaredNorm();
      if (std::isfinite(cost_trial) && cost_trial < res.cost) {
        const double decrease = res.cost - cost_trial;
        const double scaled_step = (scale.array() * step.array()).matrix().norm();
        const double scaled_x = (scale.array() * x_trial.array()).matrix().norm();
        res.x = x_trial;
        r = r_trial;
        res.cost = cost_trial;
        lambda = std::max(lambda * 0.3, 1e-20);
        accepted = true;
        if (scaled_step <= options.step_tolerance * (scaled_x + options.step_tolerance) ||
            decrease <= options.cost_tolerance * cost_trial) {
          res.converged = true;
        }
      } else {
        lambda *= 10.0;
        if (lambda > 1e16) {
          // No descent direction left at working precision.
          stalled = true;
          break;
        }
      }
    }
    if (stalled) {
      res.converged = true;
      break;
    }
    eval_jac(res.x, jac);
    if (res.converged) break;
  }

  res.covariance = Eigen::MatrixXd::Zero(n, n);
  if (m > n) {
    Eigen::VectorXd colnorm(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      colnorm[j] = jac.col(j).norm();
      if (colnorm[j] == 0.0) colnorm[j] = 1.0;
    }
    const Eigen::MatrixXd js = jac * colnorm.cwiseInverse().asDiagonal();
    const Eigen::MatrixXd info = js.transpose() * js;
    const Eigen::MatrixXd inv = info.completeOrthogonalDecomposition().pseudoInverse();
    const double s2 = res.cost / static_cast<double>(m - n);
    res.covariance = colnorm.cwiseInverse().asDiagonal() * inv * colnorm.cwiseInverse().asDiagonal();
    res.covariance *= s2;
  }
  return res;
}

}  // namespace tadpole::lsq
