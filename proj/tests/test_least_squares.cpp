#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tadpole/least_squares.hpp"

using namespace tadpole;

TEST(LevenbergMarquardt, Rosenbrock) {
  lsq::Problem p;
  p.residual_count = 2;
  p.residuals = [](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    r[0] = 10.0 * (x[1] - x[0] * x[0]);
    r[1] = 1.0 - x[0];
  };
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  const auto res = lsq::levenberg_marquardt(p, x0);
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.x[0], 1.0, 1e-10);
  EXPECT_NEAR(res.x[1], 1.0, 1e-10);
}

TEST(LevenbergMarquardt, LinearFitCovarianceMatchesClosedForm) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 0.1);
  const int m = 50;
  Eigen::VectorXd xs(m), ys(m);
  for (int i = 0; i < m; ++i) {
    xs[i] = i * 0.1;
    ys[i] = 2.0 + 0.5 * xs[i] + n(rng);
  }
  lsq::Problem p;
  p.residual_count = m;
  p.residuals = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) { r = ys.array() - x[0] - x[1] * xs.array(); };
  p.jacobian = [&](const Eigen::VectorXd&, Eigen::MatrixXd& j) {
    j.col(0).setConstant(-1.0);
    j.col(1) = -xs;
  };
  const auto res = lsq::levenberg_marquardt(p, Eigen::VectorXd::Zero(2));
  ASSERT_TRUE(res.converged);
  Eigen::MatrixXd a(m, 2);
  a.col(0).setOnes();
  a.col(1) = xs;
  const Eigen::VectorXd beta = a.colPivHouseholderQr().solve(ys);
  EXPECT_NEAR(res.x[0], beta[0], 1e-10);
  EXPECT_NEAR(res.x[1], beta[1], 1e-10);
  const double s2 = (ys - a * beta).squaredNorm() / (m - 2);
  const Eigen::MatrixXd cov = (a.transpose() * a).inverse() * s2;
  EXPECT_NEAR(res.covariance(0, 0) / cov(0, 0), 1.0, 1e-8);
  EXPECT_NEAR(res.covariance(0, 1) / cov(0, 1), 1.0, 1e-8);
  EXPECT_NEAR(res.covariance(1, 1) / cov(1, 1), 1.0, 1e-8);
}

TEST(LevenbergMarquardt, NumericJacobianExponential) {
  lsq::Problem p;
  p.residual_count = 30;
  p.residuals = [](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    for (int i = 0; i < 30; ++i) {
      const double t = i * 0.2;
      r[i] = 3.0 * std::exp(-0.7 * t) - x[0] * std::exp(-x[1] * t);
    }
  };
  Eigen::VectorXd x0(2);
  x0 << 1.0, 0.1;
  const auto res = lsq::levenberg_marquardt(p, x0);
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.x[0], 3.0, 1e-9);
  EXPECT_NEAR(res.x[1], 0.7, 1e-9);
  EXPECT_LT(res.cost, 1e-20);
}

TEST(LevenbergMarquardt, IterationCapReportsNonConvergence) {
  lsq::Problem p;
  p.residual_count = 2;
  p.residuals = [](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    r[0] = 10.0 * (x[1] - x[0] * x[0]);
    r[1] = 1.0 - x[0];
  };
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  lsq::Options opt;
  opt.max_iterations = 2;
  const auto res = lsq::levenberg_marquardt(p, x0, opt);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.iterations, 2);
}
