#pragma once

#include <optional>
#include <string>
#include <vector>

// Lumped LC model of a CPW-strip inductor shunted by a parallel-plate
// capacitor (PPC). All quantities are SI at this layer.

namespace tadpole::lumped {

struct PpcSpec {
  double area;                   // m^2
  double capacitance_per_area;   // F/m^2
  double thickness = 42e-9;      // m, informational only

  void validate() const;
};

double ppc_capacitance(const PpcSpec& spec);

struct LumpedModel {
  double inductance;        // H
  double capacitance_ppc;   // F
  double capacitance_cpw;   // F

  void validate() const;
  double total_capacitance() const { return capacitance_ppc + capacitance_cpw; }
  /// PPC-dominated: the strip's own capacitance is smaller than the plate's.
  bool is_tadpole() const { return capacitance_cpw < capacitance_ppc; }
};

double resonance_frequency(const LumpedModel& m);
double characteristic_impedance(const LumpedModel& m);

/// PPC area that places the resonance at `target_frequency`.
/// Throws InfeasibleDesign when the implied total capacitance does not exceed `capacitance_cpw`.
double required_area(double target_frequency, double inductance, double capacitance_per_area,
                     double capacitance_cpw);

/// Inductance resonating with `total_capacitance` at `frequency`.
double implied_inductance(double frequency, double total_capacitance);

/// Total capacitance resonating with `inductance` at `frequency`.
double implied_capacitance(double frequency, double inductance);

struct CalibrationRow {
  std::string label;
  double area;        // m^2
  double frequency;   // measured resonance, Hz
};

struct CalibrationDataset {
  std::vector<CalibrationRow> rows;
  void validate() const;
};

struct CalibrationResult {
  double capacitance_per_area;        // fitted c0, F/m^2
  double capacitance_per_area_sigma;  // 1 sigma
  double inductance;                  // fixed input, H
  double capacitance_cpw;             // fixed input, F
  /// Per row: total capacitance implied by the measured frequency minus c0*A + C_cpw (F).
  std::vector<double> capacitance_residuals;
  /// Per row: (f_meas - f_model) / f_meas.
  std::vector<double> frequency_residuals;
  // Unconstrained straight line C_total = slope * A + intercept.
  double line_slope;
  double line_slope_sigma;
  double line_intercept;
  double line_intercept_sigma;
  double line_r_squared;
};

/// Least-squares c0 with C_cpw held fixed. Frequency-vs-area data only pins the
/// products L*c0 and L*C_cpw, so L must be supplied.
CalibrationResult calibrate_c0(const CalibrationDataset& data, double inductance,
                               double capacitance_cpw);

struct DesignPoint {
  std::string label;
  LumpedModel model;
  double total_length;                    // strip + PPC side, m
  std::optional<double> measured_frequency;
};

struct PredictionRow {
  std::string label;
  double predicted_frequency;
  std::optional<double> measured_frequency;
  std::optional<double> relative_error_percent;  // 100 (f_meas - f_pred) / f_meas
  double impedance;
  double size_ratio;
  bool size_ratio_uses_measured;
};

/// Measured frequencies, when present, are used for l_tot/lambda0.
std::vector<PredictionRow> prediction_report(const std::vector<DesignPoint>& designs,
                                             double eps_eff);

/// Convenience overload: designs and measured frequencies as separate lists.
std::vector<PredictionRow> prediction_report(const std::vector<DesignPoint>& designs,
                                             const std::vector<double>& measured, double eps_eff);

}  // namespace tadpole::lumped
