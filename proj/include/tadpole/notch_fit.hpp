#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tadpole/circle.hpp"
#include "tadpole/s21.hpp"
#include "tadpole/trace.hpp"

// Notch-resonator parameter extraction from complex S21:
// delay removal -> circle fit -> phase fit -> (a, alpha, phi, |Q_e|) from the
// circle geometry -> joint least-squares refinement of all seven parameters
// against the complex trace. Q_i follows 1/Q_i = 1/Q_L - cos(phi)/|Q_e|.

namespace tadpole::fit {

inline constexpr const char* kQiConvention = "diameter-correction: 1/Qi = 1/QL - cos(phi)/|Qe|";
inline constexpr const char* kUncertaintyModel =
    "covariance of the joint complex fit scaled by residual variance, first-order propagation to "
    "Q_i; 1 sigma";
inline constexpr const char* kGeometricUncertaintyModel =
    "first-order propagation from phase-fit covariance; circle scatter folded into radius/center "
    "variance; 1 sigma";

struct DelayEstimate {
  double tau;          // s
  double tau_initial;  // from the edge phase slope (or the hint)
  double sigma;        // 1 sigma from the curvature of the circle residual
  std::vector<std::string> warnings;
};

/// Initial delay from a linear fit to the unwrapped phase of the outer 10 % of
/// points at each edge (or `hint`), refined by minimizing the circle-fit
/// residual over tau.
DelayEstimate estimate_delay(const FrequencyTrace& trace, std::optional<double> hint = {});

struct PhaseFit {
  double f_r;
  double q_loaded;
  double theta0;
  Eigen::Matrix3d covariance;  // order: theta0, Q_L, f_r
  double rms;                  // rad
  int iterations;
  bool used_grid_search;
};

/// theta(f) = theta0 + 2 atan(2 Q_L (1 - f / f_r)) fitted to arg(points).
/// `points` must already be delay-corrected and centred on the circle.
/// Sample order does not matter.
PhaseFit fit_phase(std::span<const double> freq, std::span<const complex> points);

struct Uncertainties {
  double f_r = 0, q_loaded = 0, q_ext_abs = 0, q_internal = 0, phi = 0, delay = 0;

  bool operator==(const Uncertainties&) const = default;
};

struct PhotonMetrics {
  double input_power;         // W
  double mean_photons;
  double single_photon_power; // W

  bool operator==(const PhotonMetrics&) const = default;
};

double single_photon_power(double f_r, double q_loaded, double q_ext_abs);

/// <n> = Q_L^2 P_in / (pi h f_r^2 |Q_e|).
PhotonMetrics photon_metrics(double f_r, double q_loaded, double q_ext_abs, double input_power);

struct NotchFitResult {
  std::string label;
  std::optional<double> power_dbm;
  std::optional<double> temperature_k;
  s21::NotchParams params;
  double q_internal = 0;
  double loss_tangent = 0;  // 1 / Q_i
  Uncertainties sigma;
  std::optional<PhotonMetrics> photons;
  // Diagnostics
  CircleGeometry circle{};
  double residual_rms = 0;  // sqrt(mean |S21 - model|^2)
  double phase_rms = 0;
  int phase_iterations = 0;
  bool grid_search_fallback = false;
  bool refined = false;       // joint complex fit replaced the geometric estimates
  int refine_iterations = 0;
  std::size_t point_count = 0;
  std::size_t averaged_count = 1;
  std::vector<std::string> warnings;

  bool operator==(const NotchFitResult&) const = default;
};

struct ExtractOptions {
  std::optional<double> delay_hint;  // s
  bool refine = true;                // finish with a joint fit of all seven parameters
};

/// Full pipeline on a single-resonance trace. Stage failures surface as
/// FitError with stage "delay", "circle", "phase" or "derive". A failed
/// refinement keeps the geometric estimates and adds a warning.
NotchFitResult extract_notch(const FrequencyTrace& trace, const ExtractOptions& options = {});

/// Mean and sample standard deviation per parameter (stored in `sigma`).
/// Requires >= 2 results sharing one label.
NotchFitResult aggregate_fits(std::span<const NotchFitResult> results);

struct SweepRow {
  double power_dbm;
  double n_photon;
  double q_i;
  double q_i_sigma;
  double q_e;
  double q_e_sigma;
  double tan_delta;
  std::size_t trace_count;
};

/// Groups traces by power metadata, fits each, aggregates repeats, sorted by power.
std::vector<SweepRow> analyze_power_sweep(std::span<const FrequencyTrace> traces,
                                          const ExtractOptions& options = {});

/// Cuts one window per approximate resonance: +/- 10 estimated linewidths
/// (from the |S21| dip), clipped to midpoints between neighbours.
std::vector<FrequencyTrace> split_multiplexed(const FrequencyTrace& trace,
                                              std::span<const double> approx_f_r);

namespace serial {
std::vector<NotchFitResult> extract_batch(std::span<const FrequencyTrace> traces,
                                          const ExtractOptions& options = {});
}
namespace omp {
/// One trace per task. Rethrows the lowest-index failure after all tasks finish.
std::vector<NotchFitResult> extract_batch(std::span<const FrequencyTrace> traces,
                                          const ExtractOptions& options = {});
}

}  // namespace tadpole::fit
