#pragma once

// Independent reference evaluations used as test oracles. They share no code
// with the library implementations.

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

/// K(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t) by the trapezoid rule. The
/// integrand is smooth and periodic, so the error falls geometrically with n.
inline double ellipk_quadrature(double k, int n = 20000) {
  const long double h = std::numbers::pi_v<long double> / 2.0L / n;
  long double sum = 0.0L;
  for (int i = 0; i <= n; ++i) {
    const long double s = std::sin(h * i);
    const long double w = (i == 0 || i == n) ? 0.5L : 1.0L;
    sum += w / std::sqrt(1.0L - static_cast<long double>(k) * k * s * s);
  }
  return static_cast<double>(sum * h);
}

/// psi(1/2 + i y) from the partial-fraction series
///   Re = psi(1/2) + sum_{n>=0} y^2 / (u_n (u_n^2 + y^2)),  u_n = n + 1/2,
///   Im = (pi/2) tanh(pi y),
/// with the tail beyond n = N replaced by its midpoint-rule integral
/// (1/2) ln(1 + y^2 / N^2) plus the first Euler-Maclaurin correction.
inline std::complex<double> digamma_half_line(double y, long n_terms = 2000000) {
  const long double y2 = static_cast<long double>(y) * y;
  long double sum = 0.0L;
  for (long n = n_terms - 1; n >= 0; --n) {  // small terms first
    const long double u = n + 0.5L;
    sum += y2 / (u * (u * u + y2));
  }
  const long double big_n = n_terms;
  const long double tail_integral = 0.5L * std::log1p(y2 / (big_n * big_n));
  const long double g_prime = -y2 * (3.0L * big_n * big_n + y2) /
                              (big_n * big_n * (big_n * big_n + y2) * (big_n * big_n + y2));
  const long double tail = tail_integral + g_prime / 24.0L;
  const long double psi_half =
      -0.577215664901532860606512090082402431L - 2.0L * std::numbers::ln2_v<long double>;
  const double re = static_cast<double>(psi_half + sum + tail);
  const double im = std::numbers::pi / 2.0 * std::tanh(std::numbers::pi * y);
  return {re, im};
}

}  // namespace oracle
