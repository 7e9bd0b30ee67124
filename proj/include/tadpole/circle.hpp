#pragma once

#include <complex>
#include <span>

namespace tadpole::fit {

struct CircleGeometry {
  std::complex<double> center;
  double radius;
  double rms_residual;  // sqrt(mean (|z - center| - radius)^2)

  bool operator==(const CircleGeometry&) const = default;
};

/// Taubin algebraic circle fit (Newton iteration on the characteristic
/// polynomial). Throws DomainError for fewer than 3 points or collinear data.
CircleGeometry fit_circle(std::span<const std::complex<double>> points);

}  // namespace tadpole::fit
