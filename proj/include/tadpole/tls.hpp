#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

// Two-level-system (TLS) dielectric model: temperature-dependent frequency
// shift and loss tangent of a resonator whose capacitor hosts TLS defects.

namespace tadpole::tls {

/// Complex digamma function. Recurrence up to |z| >= 10, then the asymptotic
/// series through z^-12. Throws DomainError at the poles z = 0, -1, -2, ...
std::complex<double> digamma(std::complex<double> z);

struct TlsParams {
  double f0;                   // Hz
  double delta0;               // zero-temperature loss tangent
  double filling_factor = 1.0;

  void validate() const;
};

/// f_r(T) = f0 [1 + (F delta0 / pi) (Re Psi(1/2 + h f0 / (2 pi i kB T)) - ln(h f0 / (kB T)))].
/// The logarithm is evaluated at f0 so the model stays explicit.
double tls_frequency(double temperature, const TlsParams& p);

/// delta0 * tanh(h f / (2 kB T)).
double tls_loss_tangent(double temperature, double frequency, double delta0);

struct TemperaturePoint {
  double temperature;                // K
  double frequency;                  // Hz
  std::optional<double> sigma;       // Hz
};

struct TemperatureDataset {
  std::vector<TemperaturePoint> points;
  /// Throws DomainError unless temperatures are positive and strictly increasing.
  void validate() const;
};

struct TlsFitOptions {
  double filling_factor = 1.0;
  bool use_weights = true;   // use sigma column when every row has one
  int max_iterations = 200;
};

struct TlsFitResult {
  TlsParams params;
  double f0_sigma;
  double delta0_sigma;
  std::vector<double> residuals;  // f_meas - f_model, Hz
  double chi_square;
  bool weighted;
  int iterations;
};

/// Levenberg-Marquardt fit of (f0, delta0) with F held fixed. Needs >= 4 rows.
TlsFitResult fit_tls(const TemperatureDataset& data, const TlsFitOptions& options = {});

}  // namespace tadpole::tls
