#include "tadpole/lumped.hpp"

#include <cmath>
#include <set>

#include "tadpole/constants.hpp"
#include "tadpole/cpw.hpp"
#include "tadpole/errors.hpp"

namespace tadpole::lumped {

namespace {

double omega_squared(double frequency) {
  const double w = 2.0 * constants::pi * frequency;
  return w * w;
}

}  // namespace

void PpcSpec::validate() const {
  if (!(area > 0.0)) throw DomainError("ppc: area must be positive");
  if (!(capacitance_per_area > 0.0)) throw DomainError("ppc: capacitance per area must be positive");
  if (!(thickness > 0.0)) throw DomainError("ppc: dielectric thickness must be positive");
}

double ppc_capacitance(const PpcSpec& spec) {
  spec.validate();
  return spec.capacitance_per_area * spec.area;
}

void LumpedModel::validate() const {
  if (!(inductance > 0.0)) throw DomainError("lumped model: inductance must be positive");
  if (!(capacitance_ppc > 0.0)) throw DomainError("lumped model: PPC capacitance must be positive");
  if (!(capacitance_cpw > 0.0)) throw DomainError("lumped model: CPW capacitance must be positive");
}

double resonance_frequency(const LumpedModel& m) {
  m.validate();
  return 1.0 / (2.0 * constants::pi * std::sqrt(m.inductance * m.total_capacitance()));
}

double characteristic_impedance(const LumpedModel& m) {
  m.validate();
  return std::sqrt(m.inductance / m.total_capacitance());
}

double implied_capacitance(double frequency, double inductance) {
  if (!(frequency > 0.0) || !(inductance > 0.0)) {
    throw DomainError("implied_capacitance: inputs must be positive");
  }
  return 1.0 / (omega_squared(frequency) * inductance);
}

double implied_inductance(double frequency, double total_capacitance) {
  if (!(frequency > 0.0) || !(total_capacitance > 0.0)) {
    throw DomainError("implied_inductance: inputs must be positive");
  }
  return 1.0 / (omega_squared(frequency) * total_capacitance);
}

double required_area(double target_frequency, double inductance, double capacitance_per_area,
                     double capacitance_cpw) {
  if (!(capacitance_per_area > 0.0)) throw DomainError("required_area: c0 must be positive");
  if (!(capacitance_cpw >= 0.0)) throw DomainError("required_area: C_cpw must be non-negative");
  const double total = implied_capacitance(target_frequency, inductance);
  if (!(total > capacitance_cpw)) {
    throw InfeasibleDesign("required_area: target frequency too high, implied total capacitance " +
                           std::to_string(total) + " F does not exceed C_cpw");
  }
  return (total - capacitance_cpw) / capacitance_per_area;
}

void CalibrationDataset::validate() const {
  if (rows.size() < 2) throw DomainError("calibration dataset needs at least 2 rows");
  std::set<double> areas;
  for (const auto& r : rows) {
    if (!(r.area > 0.0) || !(r.frequency > 0.0)) {
      throw DomainError("calibration row '" + r.label + "': area and frequency must be positive");
    }
    if (!areas.insert(r.area).second) {
      throw DomainError("calibration dataset: duplicate area in row '" + r.label + "'");
    }
  }
}

CalibrationResult calibrate_c0(const CalibrationDataset& data, double inductance,
                               double capacitance_cpw) {
  data.validate();
  if (!(inductance > 0.0) || !(capacitance_cpw > 0.0)) {
    throw DomainError("calibrate_c0: L and C_cpw must be positive");
  }
  const std::size_t n = data.rows.size();
  std::vector<double> area(n), ctot(n);
  for (std::size_t i = 0; i < n; ++i) {
    area[i] = data.rows[i].area;
    ctot[i] = implied_capacitance(data.rows[i].frequency, inductance);
  }

  // Regression through the fixed intercept C_cpw.
  double saa = 0.0, say = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    saa += area[i] * area[i];
    say += area[i] * (ctot[i] - capacitance_cpw);
  }
  CalibrationResult out{};
  out.inductance = inductance;
  out.capacitance_cpw = capacitance_cpw;
  out.capacitance_per_area = say / saa;

  double ssr = 0.0;
  out.capacitance_residuals.resize(n);
  out.frequency_residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double model_c = out.capacitance_per_area * area[i] + capacitance_cpw;
    const double res = ctot[i] - model_c;
    out.capacitance_residuals[i] = res;
    ssr += res * res;
    const double f_model = 1.0 / (2.0 * constants::pi * std::sqrt(inductance * model_c));
    out.frequency_residuals[i] = (data.rows[i].frequency - f_model) / data.rows[i].frequency;
  }
  out.capacitance_per_area_sigma = std::sqrt(ssr / static_cast<double>(n - 1) / saa);

  // Free straight line.
  double mean_a = 0.0, mean_c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += area[i];
    mean_c += ctot[i];
  }
  mean_a /= static_cast<double>(n);
  mean_c /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (area[i] - mean_a) * (area[i] - mean_a);
    sxy += (area[i] - mean_a) * (ctot[i] - mean_c);
    syy += (ctot[i] - mean_c) * (ctot[i] - mean_c);
  }
  if (!(sxx > 0.0)) throw DomainError("calibrate_c0: degenerate areas");
  out.line_slope = sxy / sxx;
  out.line_intercept = mean_c - out.line_slope * mean_a;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ctot[i] - (out.line_slope * area[i] + out.line_intercept);
    sse += r * r;
  }
  if (n > 2) {
    const double s2 = sse / static_cast<double>(n - 2);
    out.line_slope_sigma = std::sqrt(s2 / sxx);
    out.line_intercept_sigma =
        std::sqrt(s2 * (1.0 / static_cast<double>(n) + mean_a * mean_a / sxx));
  } else {
    out.line_slope_sigma = 0.0;
    out.line_intercept_sigma = 0.0;
  }
  out.line_r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return out;
}

std::vector<PredictionRow> prediction_report(const std::vector<DesignPoint>& designs,
                                             double eps_eff) {
  std::vector<PredictionRow> rows;
  rows.reserve(designs.size());
  for (const auto& d : designs) {
    PredictionRow row{};
    row.label = d.label;
    row.predicted_frequency = resonance_frequency(d.model);
    row.impedance = characteristic_impedance(d.model);
    row.measured_frequency = d.measured_frequency;
    double f_size = row.predicted_frequency;
    if (d.measured_frequency) {
      if (!(*d.measured_frequency > 0.0)) {
        throw DomainError("prediction_report: measured frequency must be positive for '" +
                          d.label + "'");
      }
      row.relative_error_percent =
          100.0 * (*d.measured_frequency - row.predicted_frequency) / *d.measured_frequency;
      f_size = *d.measured_frequency;
    }
    row.size_ratio_uses_measured = d.measured_frequency.has_value();
    row.size_ratio = cpw::size_ratio(d.total_length, cpw::mode_wavelength(f_size, eps_eff));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<PredictionRow> prediction_report(const std::vector<DesignPoint>& designs,
                                             const std::vector<double>& measured, double eps_eff) {
  if (measured.size() != designs.size()) {
    throw DomainError("prediction_report: " + std::to_string(designs.size()) + " designs but " +
                      std::to_string(measured.size()) + " measured frequencies");
  }
  std::vector<DesignPoint> merged = designs;
  for (std::size_t i = 0; i < merged.size(); ++i) merged[i].measured_frequency = measured[i];
  return prediction_report(merged, eps_eff);
}

}  // namespace tadpole::lumped
