#include "tadpole/tls.hpp"

#include <cmath>

#include "tadpole/constants.hpp"
#include "tadpole/errors.hpp"
#include "tadpole/least_squares.hpp"

namespace tadpole::tls {

using constants::boltzmann;
using constants::pi;
using constants::planck;

void TlsParams::validate() const {
  if (!(f0 > 0.0)) throw DomainError("tls: f0 must be positive");
  if (!(delta0 >= 0.0)) throw DomainError("tls: delta0 must be non-negative");
  if (!(filling_factor > 0.0 && filling_factor <= 1.0)) {
    throw DomainError("tls: filling factor must lie in (0, 1]");
  }
}

namespace {

// Bracketed term of the frequency model, without the F delta0 / pi prefactor.
double shift_kernel(double temperature, double f0) {
  const double x = planck * f0 / (boltzmann * temperature);
  const std::complex<double> arg{0.5, -x / (2.0 * pi)};  // 1/2 + x / (2 pi i)
  return digamma(arg).real() - std::log(x);
}

}  // namespace

double tls_frequency(double temperature, const TlsParams& p) {
  if (!(temperature > 0.0)) throw DomainError("tls_frequency: temperature must be positive");
  p.validate();
  if (p.delta0 == 0.0) return p.f0;
  return p.f0 * (1.0 + p.filling_factor * p.delta0 / pi * shift_kernel(temperature, p.f0));
}

double tls_loss_tangent(double temperature, double frequency, double delta0) {
  if (!(temperature > 0.0) || !(frequency > 0.0) || !(delta0 >= 0.0)) {
    throw DomainError("tls_loss_tangent: inputs must be positive");
  }
  return delta0 * std::tanh(planck * frequency / (2.0 * boltzmann * temperature));
}

void TemperatureDataset::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const auto row = std::to_string(i + 1);
    if (!(p.temperature > 0.0)) throw DomainError("temperature row " + row + ": T must be positive");
    if (!(p.frequency > 0.0)) throw DomainError("temperature row " + row + ": f_r must be positive");
    if (p.sigma && !(*p.sigma > 0.0)) throw DomainError("temperature row " + row + ": sigma must be positive");
    if (i > 0 && !(p.temperature > points[i - 1].temperature)) {
      throw DomainError("temperature row " + row + ": temperatures must be strictly increasing");
    }
  }
}

TlsFitResult fit_tls(const TemperatureDataset& data, const TlsFitOptions& options) {
  data.validate();
  if (data.points.size() < 4) {
    throw DomainError("fit_tls: at least 4 rows required, got " + std::to_string(data.points.size()));
  }
  if (!(options.filling_factor > 0.0 && options.filling_factor <= 1.0)) {
    throw DomainError("fit_tls: filling factor must lie in (0, 1]");
  }
  const auto n = static_cast<Eigen::Index>(data.points.size());
  bool weighted = options.use_weights;
  for (const auto& p : data.points) weighted = weighted && p.sigma.has_value();

  Eigen::VectorXd weight = Eigen::VectorXd::Ones(n);
  if (weighted) {
    for (Eigen::Index i = 0; i < n; ++i) weight[i] = 1.0 / *data.points[i].sigma;
  }
  const double F = options.filling_factor;

  // delta0 is fitted in units of 1e-4 so both parameters have O(1) steps relative to their size.
  constexpr double kDeltaUnit = 1e-4;
  lsq::Problem problem;
  problem.residual_count = n;
  problem.residuals = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    const double f0 = x[0], delta0 = x[1] * kDeltaUnit;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& p = data.points[i];
      if (!(f0 > 0.0)) {
        r[i] = std::numeric_limits<double>::infinity();
        continue;
      }
      const double model = f0 * (1.0 + F * delta0 / pi * shift_kernel(p.temperature, f0));
      r[i] = (p.frequency - model) * weight[i];
    }
  };
  problem.jacobian = [&](const Eigen::VectorXd& x, Eigen::MatrixXd& jac) {
    const double f0 = x[0], delta0 = x[1] * kDeltaUnit;
    const double h = 1e-6 * f0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double T = data.points[i].temperature;
      const double g = shift_kernel(T, f0);
      const double dg = (shift_kernel(T, f0 + h) - shift_kernel(T, f0 - h)) / (2.0 * h);
      jac(i, 0) = -weight[i] * (1.0 + F * delta0 / pi * (g + f0 * dg));
      jac(i, 1) = -weight[i] * f0 * F * kDeltaUnit / pi * g;
    }
  };

  Eigen::VectorXd x0(2);
  x0 << data.points.front().frequency, 1e-4 / kDeltaUnit;
  lsq::Options lm;
  lm.max_iterations = options.max_iterations;
  const auto sol = lsq::levenberg_marquardt(problem, x0, lm);
  if (!sol.converged) {
    throw FitError("fit_tls", "no convergence after " + std::to_string(sol.iterations) +
                                  " iterations (last f0 = " + std::to_string(sol.x[0]) +
                                  " Hz, delta0 = " + std::to_string(sol.x[1] * kDeltaUnit) + ")");
  }

  TlsFitResult out{};
  out.params = {sol.x[0], sol.x[1] * kDeltaUnit, F};
  out.f0_sigma = std::sqrt(std::max(sol.covariance(0, 0), 0.0));
  out.delta0_sigma = std::sqrt(std::max(sol.covariance(1, 1), 0.0)) * kDeltaUnit;
  out.weighted = weighted;
  out.iterations = sol.iterations;
  out.chi_square = sol.cost;
  out.residuals.resize(data.points.size());
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    out.residuals[i] =
        data.points[i].frequency -
        out.params.f0 * (1.0 + F * out.params.delta0 / pi *
                                   shift_kernel(data.points[i].temperature, out.params.f0));
  }
  return out;
}

}  // namespace tadpole::tls
