#include "tadpole/circle.hpp"

#include <cmath>

#include "tadpole/errors.hpp"
#include "tadpole/kernels.hpp"

namespace tadpole::fit {

CircleGeometry fit_circle(std::span<const std::complex<double>> points) {
  if (points.size() < 3) throw DomainError("fit_circle: at least 3 points required");
  const auto origin = kernels::omp::mean(points);
  const auto m = kernels::omp::circle_moments(points, origin);

  // Moments about the centroid, as in Chernov's reference implementation.
  const double Mxx = m.xx / m.n;
  const double Myy = m.yy / m.n;
  const double Mxy = m.xy / m.n;
  const double Mxz = m.xz / m.n;
  const double Myz = m.yz / m.n;
  const double Mzz = m.zz / m.n;
  const double Mz = Mxx + Myy;
  const double cov_xy = Mxx * Myy - Mxy * Mxy;
  if (!(Mz > 0.0) || !(cov_xy > 1e-13 * Mz * Mz)) {
    throw DomainError("fit_circle: degenerate geometry (collinear or coincident points)");
  }
  const double var_z = Mzz - Mz * Mz;

  const double A3 = 4.0 * Mz;
  const double A2 = -3.0 * Mz * Mz - Mzz;
  const double A1 = var_z * Mz + 4.0 * cov_xy * Mz - Mxz * Mxz - Myz * Myz;
  const double A0 = Mxz * (Mxz * Myy - Myz * Mxy) + Myz * (Myz * Mxx - Mxz * Mxy) - var_z * cov_xy;
  const double A22 = A2 + A2;
  const double A33 = A3 + A3 + A3;

  double x = 0.0, y = A0;
  for (int iter = 0; iter < 99; ++iter) {
    const double dy = A1 + x * (A22 + A33 * x);
    const double xnew = x - y / dy;
    if (xnew == x || !std::isfinite(xnew)) break;
    const double ynew = A0 + xnew * (A1 + xnew * (A2 + xnew * A3));
    if (std::abs(ynew) >= std::abs(y)) break;
    x = xnew;
    y = ynew;
  }
  const double det = x * x - x * Mz + cov_xy;
  if (det == 0.0 || !std::isfinite(det)) {
    throw DomainError("fit_circle: degenerate geometry (singular Taubin system)");
  }
  const double xc = (Mxz * (Myy - x) - Myz * Mxy) / det / 2.0;
  const double yc = (Myz * (Mxx - x) - Mxz * Mxy) / det / 2.0;

  CircleGeometry g;
  g.center = origin + std::complex<double>{xc, yc};
  g.radius = std::sqrt(xc * xc + yc * yc + Mz);
  if (!std::isfinite(g.radius) || !(g.radius > 0.0)) {
    throw DomainError("fit_circle: degenerate geometry (non-finite radius)");
  }
  g.rms_residual = std::sqrt(kernels::omp::radial_sse(points, g.center, g.radius) / m.n);
  return g;
}

}  // namespace tadpole::fit
