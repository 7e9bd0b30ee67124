#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tadpole/circle.hpp"
#include "tadpole/constants.hpp"
#include "tadpole/errors.hpp"

using namespace tadpole;
using complex = std::complex<double>;

TEST(CircleFit, ExactPoints) {
  const complex c(0.5, 0.2);
  const double r = 0.3;
  std::vector<complex> z;
  for (int i = 0; i < 100; ++i) z.push_back(c + std::polar(r, 2.0 * constants::pi * i / 100.0));
  const auto g = fit::fit_circle(z);
  EXPECT_NEAR(std::abs(g.center - c), 0.0, 1e-12);
  EXPECT_NEAR(g.radius, r, 1e-12);
  EXPECT_LT(g.rms_residual, 1e-12);
}

TEST(CircleFit, ShortArc) {
  const complex c(-2.0, 1.0);
  const double r = 0.01;
  std::vector<complex> z;
  for (int i = 0; i < 50; ++i) z.push_back(c + std::polar(r, 0.3 + 0.5 * i / 49.0));
  const auto g = fit::fit_circle(z);
  EXPECT_NEAR(std::abs(g.center - c) / r, 0.0, 1e-8);
  EXPECT_NEAR(g.radius / r, 1.0, 1e-8);
}

TEST(CircleFit, ThreePointCircumcircle) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const complex a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng));
    // Circumcenter from perpendicular bisectors.
    const double d = 2.0 * (a.real() * (b.imag() - c.imag()) + b.real() * (c.imag() - a.imag()) +
                            c.real() * (a.imag() - b.imag()));
    if (std::abs(d) < 0.05) continue;
    const double ux = (std::norm(a) * (b.imag() - c.imag()) + std::norm(b) * (c.imag() - a.imag()) +
                       std::norm(c) * (a.imag() - b.imag())) / d;
    const double uy = (std::norm(a) * (c.real() - b.real()) + std::norm(b) * (a.real() - c.real()) +
                       std::norm(c) * (b.real() - a.real())) / d;
    const complex center(ux, uy);
    const std::vector<complex> z{a, b, c};
    const auto g = fit::fit_circle(z);
    const double scale = std::max(1.0, std::abs(a - center));
    EXPECT_NEAR(std::abs(g.center - center) / scale, 0.0, 1e-9);
    EXPECT_NEAR(g.radius / std::abs(a - center), 1.0, 1e-9);
  }
}

TEST(CircleFit, NoisyPointsStayClose) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 0.01);
  std::vector<complex> z;
  for (int i = 0; i < 2000; ++i) {
    z.push_back(complex(1.0, -1.0) + std::polar(0.5, 0.001 * i) + complex(n(rng), n(rng)));
  }
  const auto g = fit::fit_circle(z);
  EXPECT_NEAR(g.radius, 0.5, 0.01);
  EXPECT_NEAR(g.rms_residual, 0.01, 0.002);
}

TEST(CircleFit, Degenerate) {
  const std::vector<complex> two{{0, 0}, {1, 1}};
  EXPECT_THROW(fit::fit_circle(two), DomainError);
  std::vector<complex> line;
  for (int i = 0; i < 20; ++i) line.emplace_back(i, 2.0 * i + 1.0);
  EXPECT_THROW(fit::fit_circle(line), DomainError);
}
