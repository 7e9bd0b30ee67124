#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "table1.hpp"
#include "tadpole/constants.hpp"
#include "tadpole/datasets.hpp"
#include "tadpole/errors.hpp"
#include "tadpole/lumped.hpp"

using namespace tadpole;
using namespace tadpole::lumped;

namespace {

constexpr double kL = 1.0706e-9;
constexpr double kCcpw = 0.26e-12;
constexpr double kC0 = 1.39e-15 / 1e-12;  // F/m^2

LumpedModel resonator_a() { return {kL, kC0 * 206721e-12, kCcpw}; }

}  // namespace

TEST(Ppc, CapacitanceIsAreaTimesC0) {
  EXPECT_NEAR(ppc_capacitance({206721e-12, kC0}), 287.34e-12, 0.01e-12);
  EXPECT_THROW(ppc_capacitance({-1.0, kC0}), DomainError);
  EXPECT_THROW(ppc_capacitance({1e-9, kC0, 0.0}), DomainError);
}

TEST(Lumped, ResonatorAFrequencyAndImpedance) {
  const auto m = resonator_a();
  EXPECT_NEAR(resonance_frequency(m), 286.8e6, 0.1e6);
  EXPECT_NEAR(characteristic_impedance({kL, 287.34e-12, kCcpw}), 1.93, 0.005);
  EXPECT_TRUE(m.is_tadpole());
}

TEST(Lumped, UnitOscillator) {
  // L = C = 1 resonates at 1 / (2 pi) Hz.
  EXPECT_NEAR(resonance_frequency({1.0, 0.5, 0.5}), 1.0 / (2.0 * constants::pi), 1e-15);
  EXPECT_NEAR(implied_inductance(1.0 / (2.0 * constants::pi), 1.0), 1.0, 1e-15);
}

TEST(Lumped, ImpliedValues) {
  EXPECT_NEAR(implied_inductance(286.8e6, 287.60e-12), 1.0706e-9, 0.0005e-9);
  EXPECT_NEAR(implied_inductance(1086.6e6, 20.04e-12), 1.071e-9, 0.001e-9);
  EXPECT_THROW(implied_inductance(0.0, 1.0), DomainError);
  EXPECT_THROW(implied_capacitance(1.0, -1.0), DomainError);
}

TEST(Lumped, MonotoneInEveryElement) {
  const auto base = resonator_a();
  for (double s : {1.01, 1.5, 3.0}) {
    auto m = base;
    m.inductance *= s;
    EXPECT_LT(resonance_frequency(m), resonance_frequency(base));
    EXPECT_GT(characteristic_impedance(m), characteristic_impedance(base));
    m = base;
    m.capacitance_ppc *= s;
    EXPECT_LT(resonance_frequency(m), resonance_frequency(base));
    EXPECT_LT(characteristic_impedance(m), characteristic_impedance(base));
    m = base;
    m.capacitance_cpw *= s;
    EXPECT_LT(resonance_frequency(m), resonance_frequency(base));
  }
}

TEST(Lumped, RequiredAreaInvertsResonance) {
  EXPECT_NEAR(required_area(286.8e6, kL, kC0, kCcpw) / 1e-12, 206721.0, 206.7);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lf(8.0, 9.5), la(-9.0, -7.0);
  for (int i = 0; i < 500; ++i) {
    const double f = std::pow(10.0, lf(rng));
    const double c_cpw = 1e-13;
    const double l = std::pow(10.0, la(rng) - 1.0);
    double area = 0.0;
    try {
      area = required_area(f, l, kC0, c_cpw);
    } catch (const InfeasibleDesign&) {
      continue;
    }
    EXPECT_NEAR(resonance_frequency({l, kC0 * area, c_cpw}) / f, 1.0, 1e-12);
  }
}

TEST(Lumped, InfeasibleTarget) {
  // C_cpw alone already resonates below 10 GHz with this L.
  EXPECT_THROW(required_area(10e9, kL, kC0, kCcpw), InfeasibleDesign);
}

TEST(Lumped, ModelValidation) {
  EXPECT_THROW(resonance_frequency({0.0, 1e-12, 1e-13}), DomainError);
  EXPECT_THROW(characteristic_impedance({1e-9, 1e-12, -1e-13}), DomainError);
}

TEST(Calibration, TableRecoversC0) {
  const auto data = io::read_calibration_csv(table1::path());
  ASSERT_EQ(data.rows.size(), 12u);
  const auto r = calibrate_c0(data, kL, kCcpw);
  EXPECT_NEAR(r.capacitance_per_area * 1e3, 1.39, 0.05);  // fF/um^2
  EXPECT_GT(r.capacitance_per_area_sigma, 0.0);
  EXPECT_EQ(r.capacitance_residuals.size(), 12u);
  EXPECT_GT(r.line_r_squared, 0.99);
}

TEST(Calibration, NoiselessRoundTrip) {
  const double c0 = 1.40e-15 / 1e-12;
  CalibrationDataset d;
  for (double a_um2 : {14221.0, 35905.0, 71821.0, 121870.0, 206721.0}) {
    const double area = a_um2 * 1e-12;
    d.rows.push_back({"", area, resonance_frequency({kL, c0 * area, kCcpw})});
  }
  const auto r = calibrate_c0(d, kL, kCcpw);
  EXPECT_NEAR(r.capacitance_per_area / c0, 1.0, 1e-12);
  EXPECT_NEAR(r.line_slope / c0, 1.0, 1e-9);
  EXPECT_NEAR(r.line_intercept / kCcpw, 1.0, 1e-6);
  for (double res : r.frequency_residuals) EXPECT_NEAR(res, 0.0, 1e-12);
}

TEST(Calibration, RejectsDegenerateData) {
  CalibrationDataset one{{{"A", 1e-8, 3e8}}};
  EXPECT_THROW(calibrate_c0(one, kL, kCcpw), DomainError);
  CalibrationDataset same{{{"A", 1e-8, 3e8}, {"B", 1e-8, 3.1e8}}};
  EXPECT_THROW(calibrate_c0(same, kL, kCcpw), DomainError);
  CalibrationDataset ok{{{"A", 1e-8, 3e8}, {"B", 2e-8, 2.5e8}}};
  EXPECT_THROW(calibrate_c0(ok, 0.0, kCcpw), DomainError);
}

TEST(Prediction, RelativeErrorUsesMeasuredDenominator) {
  const DesignPoint d{"A", resonator_a(), 2000e-6 + std::sqrt(206721e-12), 290.5e6};
  const auto rows = prediction_report({d}, 6.45);
  ASSERT_EQ(rows.size(), 1u);
  const double f_pred = rows[0].predicted_frequency;
  EXPECT_NEAR(*rows[0].relative_error_percent, 100.0 * (290.5e6 - f_pred) / 290.5e6, 1e-12);
  EXPECT_NEAR(*rows[0].relative_error_percent, 1.27, 0.03);
  EXPECT_TRUE(rows[0].size_ratio_uses_measured);
}

TEST(Prediction, ZeroErrorWhenMeasuredEqualsPredicted) {
  const auto m = resonator_a();
  const auto rows = prediction_report({{"A", m, 2e-3, {}}}, {resonance_frequency(m)}, 6.45);
  EXPECT_NEAR(*rows[0].relative_error_percent, 0.0, 1e-12);
}

TEST(Prediction, MismatchedLengths) {
  EXPECT_THROW(prediction_report({{"A", resonator_a(), 2e-3, {}}}, std::vector<double>{}, 6.45),
               DomainError);
}

TEST(TableFixture, ImpliedInductanceIsConsistent) {
  const auto rows = table1::load();
  ASSERT_EQ(rows.size(), 12u);
  double sum = 0.0, sum2 = 0.0;
  for (const auto& r : rows) {
    const double l = implied_inductance(r.f_pred_mhz * 1e6, table1::total_capacitance(r));
    sum += l;
    sum2 += l * l;
  }
  const double mean = sum / 12.0;
  const double sd = std::sqrt((sum2 - 12.0 * mean * mean) / 11.0);
  EXPECT_NEAR(mean, 1.071e-9, 0.001e-9);
  EXPECT_LT(sd / mean, 0.005);
}
