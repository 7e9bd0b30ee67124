#pragma once

// Per-element bodies shared by the serial and OpenMP kernels so both produce
// bit-identical element-wise results.

#include <cmath>
#include <span>

#include "tadpole/constants.hpp"
#include "tadpole/kernels.hpp"

namespace tadpole::kernels::detail {

inline complex notch_point(double f, std::span<const Resonance> resonances, const Environment& env) {
  complex bracket{1.0, 0.0};
  for (const auto& r : resonances) {
    const complex denom{1.0, 2.0 * r.q_loaded * (f / r.f_r - 1.0)};
    bracket *= 1.0 - r.coupling / denom;
  }
  return env.gain * std::polar(1.0, -2.0 * constants::pi * f * env.delay) * bracket;
}

inline complex undelay_point(double f, complex z, double tau) {
  return z * std::polar(1.0, 2.0 * constants::pi * f * tau);
}

inline void accumulate_moments(CircleMoments& m, complex v, complex origin) {
  const double x = v.real() - origin.real();
  const double y = v.imag() - origin.imag();
  const double zz = x * x + y * y;
  m.n += 1.0;
  m.x += x;
  m.y += y;
  m.xx += x * x;
  m.yy += y * y;
  m.xy += x * y;
  m.xz += x * zz;
  m.yz += y * zz;
  m.zz += zz * zz;
}

inline void merge(CircleMoments& a, const CircleMoments& b) {
  a.n += b.n;
  a.x += b.x;
  a.y += b.y;
  a.xx += b.xx;
  a.yy += b.yy;
  a.xy += b.xy;
  a.xz += b.xz;
  a.yz += b.yz;
  a.zz += b.zz;
}

inline double radial_residual_sq(complex v, complex center, double radius) {
  const double d = std::abs(v - center) - radius;
  return d * d;
}

}  // namespace tadpole::kernels::detail
