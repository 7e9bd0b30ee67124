#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference in
// `serial` and an OpenMP version in `omp`. The OpenMP reductions sum fixed-size
// blocks in index order, so their results do not depend on the thread count;
// they differ from the serial sums only by rounding.

#include <complex>
#include <cstddef>
#include <span>

namespace tadpole::kernels {

using complex = std::complex<double>;

/// One notch term: 1 - coupling / (1 + 2i q_loaded (f / f_r - 1)).
struct Resonance {
  double f_r;
  double q_loaded;
  complex coupling;  // (Q_L / |Q_e|) e^{i phi}
};

/// Shared environment factor gain * exp(-2 pi i f delay).
struct Environment {
  complex gain{1.0, 0.0};
  double delay = 0.0;
};

/// Raw sums over points z_i - origin, with z = x^2 + y^2.
struct CircleMoments {
  double n = 0, x = 0, y = 0, xx = 0, yy = 0, xy = 0, xz = 0, yz = 0, zz = 0;
};

inline constexpr std::size_t kReductionBlock = 256;

namespace serial {

void notch_response(std::span<const double> freq, std::span<const Resonance> resonances,
                    const Environment& env, std::span<complex> out);

/// out_i = in_i * exp(2 pi i f_i tau), i.e. removes a delay tau.
void remove_delay(std::span<const double> freq, std::span<const complex> in, double tau,
                  std::span<complex> out);

complex mean(std::span<const complex> z);
CircleMoments circle_moments(std::span<const complex> z, complex origin);

/// sum (|z_i - center| - radius)^2
double radial_sse(std::span<const complex> z, complex center, double radius);

}  // namespace serial

namespace omp {

void notch_response(std::span<const double> freq, std::span<const Resonance> resonances,
                    const Environment& env, std::span<complex> out);
void remove_delay(std::span<const double> freq, std::span<const complex> in, double tau,
                  std::span<complex> out);
complex mean(std::span<const complex> z);
CircleMoments circle_moments(std::span<const complex> z, complex origin);
double radial_sse(std::span<const complex> z, complex center, double radius);

}  // namespace omp

}  // namespace tadpole::kernels
