#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace tadpole::lsq {

/// r(x) and optionally J(x) = dr/dx. Without a Jacobian callback the solver
/// uses central differences.
struct Problem {
  Eigen::Index residual_count = 0;
  std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r)> residuals;
  std::function<void(const Eigen::VectorXd& x, Eigen::MatrixXd& jac)> jacobian;
};

struct Options {
  int max_iterations = 200;
  double step_tolerance = 1e-14;   // relative, on scaled parameters
  double cost_tolerance = 1e-15;   // relative cost decrease on an accepted step
  double initial_damping = 1e-3;
};

struct Result {
  Eigen::VectorXd x;
  Eigen::MatrixXd covariance;  // (J^T J)^-1 * cost / (m - n); zero when m <= n
  double cost = 0.0;           // sum of squared residuals
  int iterations = 0;
  bool converged = false;
};

/// Levenberg-Marquardt with Marquardt (diagonal) scaling. Never throws on
/// non-convergence; callers inspect `converged` and report their own stage.
Result levenberg_marquardt(const Problem& problem, Eigen::VectorXd x0, const Options& options = {});

}  // namespace tadpole::lsq
