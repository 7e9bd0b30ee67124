#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tadpole/kernels.hpp"
#include "tadpole/trace.hpp"

// Notch-type transmission model
//   S21(f) = a e^{i alpha} e^{-2 pi i f tau} [1 - (Q_L/|Q_e|) e^{i phi} / (1 + 2i Q_L (f/f_r - 1))]
// and trace synthesis on top of it.

namespace tadpole::s21 {

struct NotchParams {
  double f_r;             // Hz
  double q_loaded;        // Q_L
  double q_ext_abs;       // |Q_e|
  double phi = 0.0;       // impedance-mismatch rotation, rad
  double amplitude = 1.0; // a
  double alpha = 0.0;     // rad
  double delay = 0.0;     // tau, s

  /// Throws DomainError unless f_r, Q_L, |Q_e|, a > 0 and the derived Q_i is
  /// positive whenever cos(phi) > 0.
  void validate() const;

  /// 1/Q_i = 1/Q_L - cos(phi)/|Q_e|.
  double q_internal() const;

  kernels::Resonance resonance() const;
  kernels::Environment environment() const;

  bool operator==(const NotchParams&) const = default;
};

complex s21_model(double f, const NotchParams& p);

/// Noise generator recorded in trace attributes: mt19937_64 feeding Box-Muller,
/// one 64-bit draw per uniform, u = (x >> 11) * 2^-53.
inline constexpr const char* kNoiseAlgorithm = "mt19937_64/box-muller";

/// Evaluates the model on `grid`, then adds i.i.d. N(0, sigma^2) to each quadrature.
FrequencyTrace synthesize_trace(const NotchParams& p, std::span<const double> grid, double sigma,
                                std::uint64_t seed);

/// Adds seeded complex Gaussian noise in place and records the generator in the attributes.
void add_noise(FrequencyTrace& trace, double sigma, std::uint64_t seed);

/// Product of per-resonator notch brackets under one environment factor, taken
/// from the first resonator. The others must share (a, alpha, tau).
FrequencyTrace compose_multiplexed(std::span<const NotchParams> params, std::span<const double> grid);

/// n equally spaced points on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

/// n points spanning f_r +/- linewidths * f_r / Q_L.
std::vector<double> linewidth_grid(const NotchParams& p, double linewidths, std::size_t n);

}  // namespace tadpole::s21
