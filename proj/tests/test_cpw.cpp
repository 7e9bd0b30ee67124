#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tadpole/constants.hpp"
#include "tadpole/cpw.hpp"
#include "tadpole/errors.hpp"

using namespace tadpole;

namespace {

cpw::CpwGeometry reference_geometry() { return {10e-6, 6e-6, 2000e-6}; }

}  // namespace

TEST(Ellipk, ZeroModulusIsHalfPi) { EXPECT_NEAR(cpw::ellipk(0.0), constants::pi / 2.0, 1e-15); }

TEST(Ellipk, ReferenceValue) { EXPECT_NEAR(cpw::ellipk(0.45455), 1.66297, 5e-6); }

TEST(Ellipk, MatchesQuadrature) {
  for (double k : {0.01, 0.2, 0.5, 0.8, 0.95, 0.999}) {
    EXPECT_NEAR(cpw::ellipk(k), oracle::ellipk_quadrature(k), 1e-12) << "k = " << k;
  }
}

TEST(Ellipk, NearOneIsLargeButFinite) {
  const double v = cpw::ellipk(0.99999);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(v, 6.0);
}

TEST(Ellipk, RejectsOutsideDomain) {
  EXPECT_THROW(cpw::ellipk(1.0), DomainError);
  EXPECT_THROW(cpw::ellipk(-0.1), DomainError);
  EXPECT_THROW(cpw::ellipk(std::nan("")), DomainError);
}

TEST(Ellipk, StrictlyIncreasing) {
  double prev = cpw::ellipk(0.0);
  for (int i = 1; i < 1000; ++i) {
    const double v = cpw::ellipk(i / 1000.0);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(LineParams, ReferenceGeometry) {
  const auto t = cpw::line_params(reference_geometry());
  EXPECT_NEAR(t.eps_eff, 6.45, 1e-12);
  EXPECT_NEAR(t.capacitance_per_length, 169.4e-12, 0.1e-12);
  EXPECT_NEAR(t.inductance_per_length, 423.6e-9, 0.1e-9);
  EXPECT_NEAR(t.impedance, 50.0, 0.1);
  EXPECT_NEAR(t.phase_velocity, constants::speed_of_light / std::sqrt(6.45), 1.0);
}

TEST(LineParams, OverrideShortCircuitsSubstrate) {
  auto g = reference_geometry();
  g.eps_r = 1.0;
  g.eps_eff = 6.45;
  EXPECT_DOUBLE_EQ(cpw::line_params(g).capacitance_per_length,
                   cpw::line_params(reference_geometry()).capacitance_per_length);
}

TEST(LineParams, ProductIdentityOverRandomGeometries) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> um(1.0, 100.0), er(1.0, 20.0);
  const double c2 = constants::speed_of_light * constants::speed_of_light;
  for (int i = 0; i < 200; ++i) {
    cpw::CpwGeometry g{um(rng) * 1e-6, um(rng) * 1e-6, um(rng) * 1e-4, er(rng)};
    const auto t = cpw::line_params(g);
    EXPECT_NEAR(t.inductance_per_length * t.capacitance_per_length * c2 / t.eps_eff, 1.0, 1e-12);
    EXPECT_NEAR(t.impedance * t.impedance * t.capacitance_per_length / t.inductance_per_length, 1.0,
                1e-12);
  }
}

TEST(StripLc, ReferenceStrip) {
  const auto lc = cpw::strip_lc(reference_geometry());
  EXPECT_NEAR(lc.inductance, 0.8473e-9, 0.0005e-9);
  EXPECT_NEAR(lc.capacitance, 0.3387e-12, 0.0005e-12);
}

TEST(StripLc, LinearInLength) {
  auto g = reference_geometry();
  const auto one = cpw::strip_lc(g);
  g.length *= 2.0;
  const auto two = cpw::strip_lc(g);
  EXPECT_DOUBLE_EQ(two.inductance, 2.0 * one.inductance);
  EXPECT_DOUBLE_EQ(two.capacitance, 2.0 * one.capacitance);
}

TEST(StripLc, RejectsZeroLength) {
  auto g = reference_geometry();
  g.length = 0.0;
  EXPECT_THROW(cpw::strip_lc(g), DomainError);
}

TEST(Geometry, RejectsInvalidFields) {
  auto g = reference_geometry();
  g.width = -1e-6;
  EXPECT_THROW(g.validate(), DomainError);
  g = reference_geometry();
  g.eps_eff = 0.5;
  EXPECT_THROW(g.validate(), DomainError);
}

TEST(Wavelength, UnitCase) {
  EXPECT_NEAR(cpw::mode_wavelength(constants::speed_of_light, 1.0), 1.0, 1e-15);
}

TEST(Wavelength, SmallestResonatorRatio) {
  const double l_tot = 2000e-6 + std::sqrt(14221e-12);
  const double ratio = cpw::size_ratio(l_tot, cpw::mode_wavelength(1099.1e6, 6.45));
  EXPECT_NEAR(ratio, 0.0197, 0.00005);
}

TEST(Wavelength, RatioIncreasesWithFrequency) {
  double prev = 0.0;
  for (double f = 1e8; f < 1e10; f *= 1.3) {
    const double r = cpw::size_ratio(2e-3, cpw::mode_wavelength(f, 6.45));
    EXPECT_GT(r, prev);
    prev = r;
  }
}

TEST(Wavelength, QuarterWaveLimit) {
  // A bare strip resonating as a quarter-wave line has l / lambda0 = 1/4.
  const auto g = reference_geometry();
  const double f = cpw::line_params(g).phase_velocity / (4.0 * g.length);
  EXPECT_NEAR(cpw::size_ratio(g.length, cpw::mode_wavelength(f, g.effective_permittivity())), 0.25,
              1e-12);
}

TEST(Wavelength, RejectsNonPositive) {
  EXPECT_THROW(cpw::mode_wavelength(0.0, 6.45), DomainError);
  EXPECT_THROW(cpw::mode_wavelength(1e9, 0.5), DomainError);
  EXPECT_THROW(cpw::size_ratio(-1.0, 1.0), DomainError);
}
