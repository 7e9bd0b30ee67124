#pragma once

#include <optional>
#include <utility>

// Coplanar-waveguide line parameters from the quasi-static conformal-mapping
// solution. All quantities are SI.

namespace tadpole::cpw {

/// Complete elliptic integral of the first kind K(k), modulus convention.
/// Arithmetic-geometric mean; throws DomainError outside [0, 1).
double ellipk(double k);

struct CpwGeometry {
  double width;                    // center conductor w (m)
  double gap;                      // slot s (m)
  double length;                   // strip length l (m)
  double eps_r = 11.9;             // substrate relative permittivity
  std::optional<double> eps_eff;   // overrides (eps_r + 1) / 2 when set

  void validate() const;
  double effective_permittivity() const;
};

struct TlineParams {
  double capacitance_per_length;  // F/m
  double inductance_per_length;   // H/m
  double eps_eff;
  double impedance;               // ohm
  double phase_velocity;          // m/s
};

TlineParams line_params(const CpwGeometry& geom);

struct StripLC {
  double inductance;   // H
  double capacitance;  // F
};

/// Total inductance and capacitance of a strip of length geom.length.
StripLC strip_lc(const CpwGeometry& geom);

/// Free-space-referenced wavelength of a mode at `frequency` in a medium of `eps_eff`.
double mode_wavelength(double frequency, double eps_eff);

/// total_length / wavelength.
double size_ratio(double total_length, double wavelength);

}  // namespace tadpole::cpw
