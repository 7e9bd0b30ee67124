#include <cmath>

#include "tadpole/constants.hpp"
#include "tadpole/errors.hpp"
#include "tadpole/tls.hpp"

namespace tadpole::tls {

std::complex<double> digamma(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    throw DomainError("digamma: pole at non-positive integer " + std::to_string(z.real()));
  }
  if (z.real() < 0.0) {
    // Reflection keeps the asymptotic series away from the negative real axis.
    return digamma(1.0 - z) - constants::pi / std::tan(constants::pi * z);
  }
  std::complex<double> acc{0.0, 0.0};
  while (std::abs(z) < 10.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  // B_2k / (2k) for k = 1..6.
  static constexpr double coef[] = {
      1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0,
  };
  const std::complex<double> w = 1.0 / (z * z);
  std::complex<double> series{0.0, 0.0};
  for (int k = 5; k >= 0; --k) series = (series + coef[k]) * w;
  return acc + std::log(z) - 0.5 / z - series;
}

}  // namespace tadpole::tls
