#include "tadpole/cpw.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tadpole/constants.hpp"
#include "tadpole/errors.hpp"

namespace tadpole::cpw {

double ellipk(double k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw DomainError("ellipk: modulus must lie in [0, 1), got " + std::to_string(k));
  }
  // K(k) = pi / (2 AGM(1, k')), k' computed as sqrt((1-k)(1+k)) to keep
  // precision near k -> 1.
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  for (int i = 0; i < 64; ++i) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    a = an;
    b = bn;
    if (std::abs(a - b) <= 2.0 * std::numeric_limits<double>::epsilon() * a) break;
  }
  return constants::pi / (a + b);
}

void CpwGeometry::validate() const {
  if (!(width > 0.0)) throw DomainError("cpw: width must be positive");
  if (!(gap > 0.0)) throw DomainError("cpw: gap must be positive");
  if (!(length > 0.0)) throw DomainError("cpw: length must be positive");
  if (!(eps_r >= 1.0)) throw DomainError("cpw: eps_r must be >= 1");
  if (eps_eff && !(*eps_eff >= 1.0)) throw DomainError("cpw: eps_eff override must be >= 1");
}

double CpwGeometry::effective_permittivity() const {
  return eps_eff ? *eps_eff : 0.5 * (eps_r + 1.0);
}

TlineParams line_params(const CpwGeometry& geom) {
  geom.validate();
  const double k0 = geom.width / (geom.width + 2.0 * geom.gap);
  const double k0p = std::sqrt((1.0 - k0) * (1.0 + k0));
  const double ratio = ellipk(k0) / ellipk(k0p);  // K(k0)/K(k0')
  const double eps_eff = geom.effective_permittivity();

  TlineParams p{};
  p.eps_eff = eps_eff;
  p.capacitance_per_length = 4.0 * constants::eps0 * eps_eff * ratio;
  p.inductance_per_length = constants::mu0 / 4.0 / ratio;
  p.impedance = std::sqrt(p.inductance_per_length / p.capacitance_per_length);
  p.phase_velocity = 1.0 / std::sqrt(p.inductance_per_length * p.capacitance_per_length);
  return p;
}

StripLC strip_lc(const CpwGeometry& geom) {
  const TlineParams p = line_params(geom);
  return {p.inductance_per_length * geom.length, p.capacitance_per_length * geom.length};
}

double mode_wavelength(double frequency, double eps_eff) {
  if (!(frequency > 0.0)) throw DomainError("mode_wavelength: frequency must be positive");
  if (!(eps_eff >= 1.0)) throw DomainError("mode_wavelength: eps_eff must be >= 1");
  return constants::speed_of_light / (frequency * std::sqrt(eps_eff));
}

double size_ratio(double total_length, double wavelength) {
  if (!(total_length > 0.0)) throw DomainError("size_ratio: total length must be positive");
  if (!(wavelength > 0.0)) throw DomainError("size_ratio: wavelength must be positive");
  return total_length / wavelength;
}

}  // namespace tadpole::cpw
