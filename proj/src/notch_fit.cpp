#include "tadpole/notch_fit.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

#include "tadpole/constants.hpp"
#include "tadpole/errors.hpp"
#include "tadpole/kernels.hpp"
#include "tadpole/least_squares.hpp"

namespace tadpole::fit {

using constants::pi;

namespace {

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * pi);
  return a <= -pi ? a + 2.0 * pi : a;
}

std::vector<double> unwrapped_phase(std::span<const complex> z) {
  std::vector<double> ph(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    ph[i] = std::arg(z[i]);
    if (i > 0) ph[i] = ph[i - 1] + wrap_angle(ph[i] - ph[i - 1]);
  }
  return ph;
}

// Least-squares slope of y against x.
double slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

// Radial SSE of the best circle through the trace after removing `tau`.
class DelayObjective {
 public:
  explicit DelayObjective(const FrequencyTrace& t) : t_(t), buf_(t.size()) {}

  double operator()(double tau) const {
    kernels::omp::remove_delay(t_.frequency, t_.s21, tau, buf_);
    try {
      const auto c = fit_circle(buf_);
      return c.rms_residual * c.rms_residual * static_cast<double>(buf_.size());
    } catch (const DomainError&) {
      return std::numeric_limits<double>::max();
    }
  }

 private:
  const FrequencyTrace& t_;
  mutable std::vector<complex> buf_;
};

double phase_model(double f, double theta0, double q, double fr) {
  return theta0 + 2.0 * std::atan(2.0 * q * (1.0 - f / fr));
}

struct PhaseGuess {
  double theta0, q, fr;
};

// The phase falls by 2 pi across the resonance: theta0 is the midpoint of the
// edge plateaus, f_r the frequency where the smoothed phase crosses it, and
// f_r / Q_L the distance between the +/- pi/2 crossings.
PhaseGuess initial_phase_guess(std::span<const double> f, std::span<const double> th) {
  const std::size_t n = f.size();
  const std::size_t half = std::max<std::size_t>(1, n / 50);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    s[i] = std::accumulate(th.begin() + static_cast<std::ptrdiff_t>(lo),
                           th.begin() + static_cast<std::ptrdiff_t>(hi) + 1, 0.0) /
           static_cast<double>(hi - lo + 1);
  }
  const std::size_t edge = std::max<std::size_t>(1, n / 20);
  const double th_lo = std::accumulate(th.begin(), th.begin() + static_cast<std::ptrdiff_t>(edge), 0.0) / edge;
  const double th_hi = std::accumulate(th.end() - static_cast<std::ptrdiff_t>(edge), th.end(), 0.0) / edge;
  const double mid = 0.5 * (th_lo + th_hi);
  const double sign = th_lo >= th_hi ? 1.0 : -1.0;

  // First frequency where sign * (s - mid) drops to `level`, linearly interpolated.
  auto crossing = [&](double level) -> std::optional<double> {
    for (std::size_t i = 1; i < n; ++i) {
      const double a = sign * (s[i - 1] - mid) - level;
      const double b = sign * (s[i] - mid) - level;
      if (a > 0.0 && b <= 0.0) return f[i - 1] + (f[i] - f[i - 1]) * a / (a - b);
    }
    return std::nullopt;
  };
  const double span = f[n - 1] - f[0];
  const double fr = crossing(0.0).value_or(f[n / 2]);
  const auto fa = crossing(0.5 * pi);
  const auto fb = crossing(-0.5 * pi);
  double width = fa && fb && *fb > *fa ? *fb - *fa : 0.0;
  if (!(width > 0.0)) {
    // Narrow trace: use the central slope, d theta / df = -4 Q_L / f_r at resonance.
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(f[i] - fr) <= 0.1 * span) {
        x.push_back(f[i]);
        y.push_back(sign * s[i]);
      }
    }
    const double k = x.size() >= 2 ? -slope(x, y) : 0.0;
    width = k > 0.0 ? 4.0 / k : span;
  }
  return {mid, fr / width, fr};
}

struct PhaseSolve {
  lsq::Result lm;
  bool valid;
};

PhaseSolve solve_phase(std::span<const double> f, std::span<const double> th, const PhaseGuess& g) {
  const auto n = static_cast<Eigen::Index>(f.size());
  lsq::Problem prob;
  prob.residual_count = n;
  prob.residuals = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    for (Eigen::Index i = 0; i < n; ++i) r[i] = wrap_angle(th[i] - phase_model(f[i], x[0], x[1], x[2]));
  };
  prob.jacobian = [&](const Eigen::VectorXd& x, Eigen::MatrixXd& jac) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = 2.0 * x[1] * (1.0 - f[i] / x[2]);
      const double k = 2.0 / (1.0 + u * u);
      jac(i, 0) = -1.0;
      jac(i, 1) = -k * 2.0 * (1.0 - f[i] / x[2]);
      jac(i, 2) = -k * 2.0 * x[1] * f[i] / (x[2] * x[2]);
    }
  };
  Eigen::VectorXd x0(3);
  x0 << g.theta0, g.q, g.fr;
  PhaseSolve out{lsq::levenberg_marquardt(prob, x0), false};
  const double span = f.back() - f.front();
  const auto& x = out.lm.x;
  out.valid = out.lm.converged && x[1] > 0.0 && std::isfinite(x[1]) && x[2] > f.front() - span &&
              x[2] < f.back() + span;
  return out;
}

PhaseGuess grid_search_guess(std::span<const double> f, std::span<const double> th) {
  const std::size_t n = f.size();
  const double span = f.back() - f.front();
  const double step = span / static_cast<double>(n - 1);
  PhaseGuess best{th[n / 2], 1.0, f[n / 2]};
  double best_sse = std::numeric_limits<double>::infinity();
  constexpr int kFr = 61, kQ = 40;
  for (int i = 0; i < kFr; ++i) {
    const double fr = f.front() + span * i / (kFr - 1);
    const double q_lo = 0.2 * fr / span, q_hi = 5.0 * fr / step;
    for (int j = 0; j < kQ; ++j) {
      const double q = q_lo * std::pow(q_hi / q_lo, static_cast<double>(j) / (kQ - 1));
      // Optimal theta0 for fixed (fr, q): circular mean of the offsets.
      double c = 0.0, s = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double d = th[k] - phase_model(f[k], 0.0, q, fr);
        c += std::cos(d);
        s += std::sin(d);
      }
      const double theta0 = std::atan2(s, c);
      double sse = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double r = wrap_angle(th[k] - phase_model(f[k], theta0, q, fr));
        sse += r * r;
      }
      if (sse < best_sse) {
        best_sse = sse;
        best = {theta0, q, fr};
      }
    }
  }
  return best;
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const FitError&) {
    throw;
  } catch (const DomainError& e) {
    throw FitError(name, e.what());
  }
}

double sample_std(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

struct Refined {
  s21::NotchParams params;
  Eigen::Matrix<double, 7, 7> covariance;  // f_r, Q_L, |Q_e|, phi, a, alpha(f_ref), tau [ns]
  int iterations;
};

// Joint least-squares fit of every model parameter to the complex trace,
// started from the geometric estimates. The environment phase is referenced
// to `f_ref` so alpha and tau decouple.
std::optional<Refined> refine_fit(const FrequencyTrace& t, const s21::NotchParams& start) {
  const auto n = static_cast<Eigen::Index>(t.size());
  const double f_ref = start.f_r;
  constexpr double kTauUnit = 1e-9;
  lsq::Problem prob;
  prob.residual_count = 2 * n;
  prob.residuals = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    const complex coupling = std::polar(x[1] / x[2], x[3]);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double f = t.frequency[static_cast<std::size_t>(i)];
      const complex bracket = 1.0 - coupling / complex(1.0, 2.0 * x[1] * (f / x[0] - 1.0));
      const complex env = std::polar(x[4], x[5] - 2.0 * pi * (f - f_ref) * x[6] * kTauUnit);
      const complex d = t.s21[static_cast<std::size_t>(i)] - env * bracket;
      r[2 * i] = d.real();
      r[2 * i + 1] = d.imag();
    }
  };
  Eigen::VectorXd x0(7);
  x0 << start.f_r, start.q_loaded, start.q_ext_abs, start.phi, start.amplitude,
      start.alpha - 2.0 * pi * f_ref * start.delay, start.delay / kTauUnit;
  const auto lm = lsq::levenberg_marquardt(prob, x0);
  const auto& x = lm.x;
  if (!lm.converged || !x.allFinite() || !(x[0] > 0.0) || !(x[1] > 0.0) || !(x[2] > 0.0) ||
      !(x[4] > 0.0) || std::abs(x[0] - start.f_r) > 10.0 * start.f_r / start.q_loaded) {
    return std::nullopt;
  }
  Refined out;
  out.params = {x[0], x[1], x[2], wrap_angle(x[3]), x[4],
                wrap_angle(x[5] + 2.0 * pi * f_ref * x[6] * kTauUnit), x[6] * kTauUnit};
  out.covariance = lm.covariance;
  out.iterations = lm.iterations;
  return out;
}

}  // namespace

DelayEstimate estimate_delay(const FrequencyTrace& trace, std::optional<double> hint) {
  trace.validate();
  const std::size_t n = trace.size();
  const double span = trace.frequency.back() - trace.frequency.front();
  DelayEstimate est{};

  // A constant-magnitude trace has no resonance; any trial delay would turn it
  // into a perfect circle and the search would be meaningless.
  const auto [lo_mag, hi_mag] = std::minmax_element(trace.s21.begin(), trace.s21.end(),
                                                    [](complex a, complex b) { return std::abs(a) < std::abs(b); });
  if (!(std::abs(*hi_mag) - std::abs(*lo_mag) > 1e-9 * std::abs(*hi_mag))) {
    throw FitError("delay", "no resonance feature: |S21| is constant across the trace");
  }

  if (hint) {
    est.tau_initial = *hint;
  } else {
    const std::size_t m = std::max<std::size_t>(2, n / 10);
    const auto ph = unwrapped_phase(trace.s21);
    const double fmid = 0.5 * (trace.frequency.front() + trace.frequency.back());
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      if (i < m || i + m >= n) {
        x.push_back(trace.frequency[i] - fmid);
        y.push_back(ph[i]);
      }
    }
    est.tau_initial = -slope(x, y) / (2.0 * pi);
  }

  // Search tau = tau_initial + u / span; |u| = 1 is a full turn of delay phase across the trace.
  DelayObjective objective(trace);
  auto at_u = [&](double u) { return objective(est.tau_initial + u / span); };
  constexpr int kScan = 81;
  constexpr double kScanHalfWidth = 1.0;
  const double cell = 2.0 * kScanHalfWidth / (kScan - 1);
  double best_u = 0.0, best_r = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double u = -kScanHalfWidth + cell * i;
    const double r = at_u(u);
    if (r < best_r) {
      best_r = r;
      best_u = u;
    }
  }
  if (best_r == std::numeric_limits<double>::max()) {
    throw FitError("delay", "circle fit failed for every trial delay");
  }
  // Two Brent passes, each on a bracket rescaled to [-1, 1] so the absolute
  // tolerance tracks the bracket width.
  double u = best_u;
  for (const double width : {cell, 1e-6 * cell}) {
    const double centre = u;
    const auto res = boost::math::tools::brent_find_minima(
        [&](double v) { return at_u(centre + width * v); }, -1.0, 1.0,
        std::numeric_limits<double>::digits / 2);
    u = centre + width * res.first;
  }
  est.tau = est.tau_initial + u / span;

  const double r_min = at_u(u);
  const double h = 1e-3;
  const double curvature = (at_u(u + h) - 2.0 * r_min + at_u(u - h)) / (h * h);
  if (n > 3 && curvature > 0.0) {
    const double s2 = r_min / static_cast<double>(n - 3);
    est.sigma = std::sqrt(2.0 * s2 / curvature) / span;
  }
  if (std::abs(u) > 0.9 * kScanHalfWidth) {
    est.warnings.push_back("delay optimum near the edge of the search window");
  }
  return est;
}

PhaseFit fit_phase(std::span<const double> freq, std::span<const complex> points) {
  if (freq.size() != points.size()) throw DomainError("fit_phase: size mismatch");
  if (freq.size() < 4) throw DomainError("fit_phase: at least 4 points required");
  std::vector<std::size_t> order(freq.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return freq[a] < freq[b]; });
  std::vector<double> f(freq.size());
  std::vector<complex> z(freq.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    f[i] = freq[order[i]];
    z[i] = points[order[i]];
  }
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (!(f[i] > f[i - 1])) throw DomainError("fit_phase: duplicate frequencies");
  }
  const auto th = unwrapped_phase(z);

  PhaseFit out{};
  auto solved = solve_phase(f, th, initial_phase_guess(f, th));
  if (!solved.valid) {
    out.used_grid_search = true;
    solved = solve_phase(f, th, grid_search_guess(f, th));
  }
  const auto& x = solved.lm.x;
  if (!solved.valid) {
    throw FitError("phase", "no convergence after " + std::to_string(solved.lm.iterations) +
                                " iterations (last f_r = " + std::to_string(x[2]) +
                                " Hz, Q_L = " + std::to_string(x[1]) + ")");
  }
  out.theta0 = wrap_angle(x[0]);
  out.q_loaded = x[1];
  out.f_r = x[2];
  out.covariance = solved.lm.covariance;
  out.rms = std::sqrt(solved.lm.cost / static_cast<double>(f.size()));
  out.iterations = solved.lm.iterations;
  return out;
}

double single_photon_power(double f_r, double q_loaded, double q_ext_abs) {
  if (!(f_r > 0.0) || !(q_loaded > 0.0) || !(q_ext_abs > 0.0)) {
    throw DomainError("single_photon_power: inputs must be positive");
  }
  return pi * constants::planck * f_r * f_r * q_ext_abs / (q_loaded * q_loaded);
}

PhotonMetrics photon_metrics(double f_r, double q_loaded, double q_ext_abs, double input_power) {
  if (!(input_power > 0.0)) throw DomainError("photon_metrics: input power must be positive");
  const double p1 = single_photon_power(f_r, q_loaded, q_ext_abs);
  return {input_power, input_power / p1, p1};
}

NotchFitResult extract_notch(const FrequencyTrace& trace, const ExtractOptions& options) {
  trace.validate();
  const std::size_t n = trace.size();

  const auto delay = stage("delay", [&] { return estimate_delay(trace, options.delay_hint); });
  std::vector<complex> corrected(n);
  kernels::omp::remove_delay(trace.frequency, trace.s21, delay.tau, corrected);
  const auto circle = stage("circle", [&] { return fit_circle(corrected); });
  std::vector<complex> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = corrected[i] - circle.center;
  const auto phase = stage("phase", [&] { return fit_phase(trace.frequency, centered); });

  const double r = circle.radius;
  const complex off_resonant = circle.center - std::polar(r, phase.theta0);
  NotchFitResult out;
  out.label = trace.label;
  out.power_dbm = trace.power_dbm;
  out.temperature_k = trace.temperature_k;
  out.point_count = n;
  out.circle = circle;
  out.phase_rms = phase.rms;
  out.phase_iterations = phase.iterations;
  out.grid_search_fallback = phase.used_grid_search;
  out.warnings = delay.warnings;

  auto& p = out.params;
  p.f_r = phase.f_r;
  p.q_loaded = phase.q_loaded;
  p.amplitude = std::abs(off_resonant);
  p.alpha = std::arg(off_resonant);
  p.q_ext_abs = p.q_loaded * p.amplitude / (2.0 * r);
  p.phi = wrap_angle(phase.theta0 + pi - p.alpha);
  p.delay = delay.tau;

  auto derive_qi = [](const s21::NotchParams& q) {
    const double inv = 1.0 / q.q_loaded - std::cos(q.phi) / q.q_ext_abs;
    if (!(inv > 0.0) || !std::isfinite(inv)) {
      throw FitError("derive", "non-positive Q_i (1/Q_i = " + std::to_string(inv) +
                                   ", Q_L = " + std::to_string(q.q_loaded) +
                                   ", |Q_e| = " + std::to_string(q.q_ext_abs) +
                                   ", phi = " + std::to_string(q.phi) + ")");
    }
    return inv;
  };
  double inv_qi = derive_qi(p);
  out.q_internal = 1.0 / inv_qi;

  // Geometric uncertainties: phase-fit covariance plus circle scatter.
  const double var_theta0 = std::max(phase.covariance(0, 0), 0.0);
  const double var_q = std::max(phase.covariance(1, 1), 0.0);
  const double var_fr = std::max(phase.covariance(2, 2), 0.0);
  const double s = circle.rms_residual;
  const double var_r = s * s / static_cast<double>(n);
  const double var_c = 2.0 * s * s / static_cast<double>(n);
  const double var_a = var_c + var_r + r * r * var_theta0;
  const double var_alpha = var_a / (p.amplitude * p.amplitude);
  auto& sg = out.sigma;
  sg.f_r = std::sqrt(var_fr);
  sg.q_loaded = std::sqrt(var_q);
  const double rel_qe2 = var_q / (p.q_loaded * p.q_loaded) +
                         var_a / (p.amplitude * p.amplitude) + var_r / (r * r);
  sg.q_ext_abs = p.q_ext_abs * std::sqrt(rel_qe2);
  const double var_phi = var_theta0 + var_alpha;
  sg.phi = std::sqrt(var_phi);
  {
    const double qe2 = p.q_ext_abs * p.q_ext_abs;
    const double d_ql = 1.0 / (p.q_loaded * p.q_loaded);
    const double d_qe = std::cos(p.phi) / qe2;
    const double d_phi = std::sin(p.phi) / p.q_ext_abs;
    const double var_inv_qi = d_ql * d_ql * var_q + d_qe * d_qe * sg.q_ext_abs * sg.q_ext_abs +
                              d_phi * d_phi * var_phi;
    sg.q_internal = out.q_internal * out.q_internal * std::sqrt(var_inv_qi);
  }
  sg.delay = delay.sigma;

  if (options.refine) {
    const auto refined = refine_fit(trace, p);
    double refined_inv_qi = 0.0;
    if (refined) {
      const double inv = 1.0 / refined->params.q_loaded -
                         std::cos(refined->params.phi) / refined->params.q_ext_abs;
      if (inv > 0.0 && std::isfinite(inv)) refined_inv_qi = inv;
    }
    if (refined_inv_qi > 0.0) {
      p = refined->params;
      inv_qi = refined_inv_qi;
      out.q_internal = 1.0 / inv_qi;
      out.refined = true;
      out.refine_iterations = refined->iterations;
      const auto& c = refined->covariance;
      auto sd = [&](int i) { return std::sqrt(std::max(c(i, i), 0.0)); };
      sg.f_r = sd(0);
      sg.q_loaded = sd(1);
      sg.q_ext_abs = sd(2);
      sg.phi = sd(3);
      sg.delay = sd(6) * 1e-9;
      // Q_i = 1 / (1/Q_L - cos(phi)/|Q_e|), gradient over (Q_L, |Q_e|, phi).
      const double qi2 = out.q_internal * out.q_internal;
      Eigen::Vector3d grad(qi2 / (p.q_loaded * p.q_loaded),
                           -qi2 * std::cos(p.phi) / (p.q_ext_abs * p.q_ext_abs),
                           -qi2 * std::sin(p.phi) / p.q_ext_abs);
      const Eigen::Matrix3d sub = c.block<3, 3>(1, 1);
      sg.q_internal = std::sqrt(std::max(grad.dot(sub * grad), 0.0));
    } else {
      out.warnings.push_back("joint refinement failed; reporting geometric estimates");
    }
  }
  out.loss_tangent = inv_qi;

  std::vector<complex> model(n);
  const auto res = p.resonance();
  kernels::omp::notch_response(trace.frequency, {&res, 1}, p.environment(), model);
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) sse += std::norm(trace.s21[i] - model[i]);
  out.residual_rms = std::sqrt(sse / static_cast<double>(n));

  if (trace.power_dbm) {
    out.photons = photon_metrics(p.f_r, p.q_loaded, p.q_ext_abs, dbm_to_watts(*trace.power_dbm));
  }

  if (std::cos(p.phi) < 0.0) {
    out.warnings.push_back("Re(1/Q_e) < 0: phi rotation makes Q_i smaller than Q_L");
  }
  const double span = trace.frequency.back() - trace.frequency.front();
  if (!options.delay_hint && span < 5.0 * p.f_r / p.q_loaded) {
    out.warnings.push_back("trace spans fewer than 5 linewidths; delay may be ambiguous");
  }
  if (p.f_r < trace.frequency.front() || p.f_r > trace.frequency.back()) {
    out.warnings.push_back("fitted f_r lies outside the frequency grid");
  }
  return out;
}

NotchFitResult aggregate_fits(std::span<const NotchFitResult> results) {
  if (results.size() < 2) throw DomainError("aggregate_fits: at least 2 results required");
  for (const auto& r : results) {
    if (r.label != results.front().label) {
      throw DomainError("aggregate_fits: mixed labels '" + results.front().label + "' and '" + r.label + "'");
    }
  }
  const double n = static_cast<double>(results.size());
  auto column = [&](auto getter) {
    std::vector<double> v;
    v.reserve(results.size());
    for (const auto& r : results) v.push_back(getter(r));
    return v;
  };
  auto mean_of = [&](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / n; };

  NotchFitResult out = results.front();
  out.averaged_count = results.size();
  out.warnings.clear();
  for (const auto& r : results) {
    for (const auto& w : r.warnings) {
      if (std::find(out.warnings.begin(), out.warnings.end(), w) == out.warnings.end()) out.warnings.push_back(w);
    }
    if (r.power_dbm != out.power_dbm) out.power_dbm.reset();
    if (r.temperature_k != out.temperature_k) out.temperature_k.reset();
  }

  auto fill = [&](auto getter, double& mean, double* spread) {
    const auto v = column(getter);
    mean = mean_of(v);
    if (spread) *spread = sample_std(v, mean);
  };
  auto& p = out.params;
  fill([](const auto& r) { return r.params.f_r; }, p.f_r, &out.sigma.f_r);
  fill([](const auto& r) { return r.params.q_loaded; }, p.q_loaded, &out.sigma.q_loaded);
  fill([](const auto& r) { return r.params.q_ext_abs; }, p.q_ext_abs, &out.sigma.q_ext_abs);
  fill([](const auto& r) { return r.params.phi; }, p.phi, &out.sigma.phi);
  fill([](const auto& r) { return r.params.delay; }, p.delay, &out.sigma.delay);
  fill([](const auto& r) { return r.params.amplitude; }, p.amplitude, nullptr);
  fill([](const auto& r) { return r.q_internal; }, out.q_internal, &out.sigma.q_internal);
  fill([](const auto& r) { return r.loss_tangent; }, out.loss_tangent, nullptr);
  fill([](const auto& r) { return r.residual_rms; }, out.residual_rms, nullptr);
  fill([](const auto& r) { return r.phase_rms; }, out.phase_rms, nullptr);
  double c = 0.0, s = 0.0;
  for (const auto& r : results) {
    c += std::cos(r.params.alpha);
    s += std::sin(r.params.alpha);
  }
  p.alpha = std::atan2(s, c);

  bool all_photons = true;
  for (const auto& r : results) all_photons = all_photons && r.photons.has_value();
  if (all_photons) {
    PhotonMetrics m{};
    fill([](const auto& r) { return r.photons->input_power; }, m.input_power, nullptr);
    fill([](const auto& r) { return r.photons->mean_photons; }, m.mean_photons, nullptr);
    fill([](const auto& r) { return r.photons->single_photon_power; }, m.single_photon_power, nullptr);
    out.photons = m;
  } else {
    out.photons.reset();
  }
  return out;
}

std::vector<SweepRow> analyze_power_sweep(std::span<const FrequencyTrace> traces,
                                          const ExtractOptions& options) {
  if (traces.empty()) throw DomainError("analyze_power_sweep: no traces");
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (!traces[i].power_dbm) {
      throw DomainError("analyze_power_sweep: trace " + std::to_string(i + 1) + " ('" +
                        traces[i].label + "') has no power metadata");
    }
  }
  const auto fits = omp::extract_batch(traces, options);
  std::map<double, std::vector<NotchFitResult>> groups;
  for (const auto& f : fits) groups[*f.power_dbm].push_back(f);

  std::vector<SweepRow> rows;
  for (const auto& [power, group] : groups) {
    const NotchFitResult r = group.size() >= 2 ? aggregate_fits(group) : group.front();
    SweepRow row{};
    row.power_dbm = power;
    row.n_photon = photon_metrics(r.params.f_r, r.params.q_loaded, r.params.q_ext_abs,
                                  dbm_to_watts(power)).mean_photons;
    row.q_i = r.q_internal;
    row.q_i_sigma = r.sigma.q_internal;
    row.q_e = r.params.q_ext_abs;
    row.q_e_sigma = r.sigma.q_ext_abs;
    row.tan_delta = 1.0 / r.q_internal;
    row.trace_count = group.size();
    rows.push_back(row);
  }
  return rows;
}

std::vector<FrequencyTrace> split_multiplexed(const FrequencyTrace& trace,
                                              std::span<const double> approx_f_r) {
  trace.validate();
  if (approx_f_r.empty()) throw DomainError("split_multiplexed: no resonance frequencies given");
  std::vector<double> centres(approx_f_r.begin(), approx_f_r.end());
  std::sort(centres.begin(), centres.end());
  for (std::size_t k = 1; k < centres.size(); ++k) {
    if (!(centres[k] > centres[k - 1])) throw DomainError("split_multiplexed: duplicate resonance frequencies");
  }
  const auto& f = trace.frequency;
  std::vector<FrequencyTrace> out;
  for (std::size_t k = 0; k < centres.size(); ++k) {
    const double lo = k == 0 ? f.front() : 0.5 * (centres[k - 1] + centres[k]);
    const double hi = k + 1 == centres.size() ? f.back() : 0.5 * (centres[k] + centres[k + 1]);
    const auto first = std::lower_bound(f.begin(), f.end(), lo) - f.begin();
    const auto last = std::upper_bound(f.begin(), f.end(), hi) - f.begin();
    if (last - first < static_cast<std::ptrdiff_t>(kMinTracePoints)) {
      throw DomainError("split_multiplexed: too few points around " + std::to_string(centres[k]) + " Hz");
    }
    std::vector<double> mag;
    for (auto i = first; i < last; ++i) mag.push_back(std::abs(trace.s21[static_cast<std::size_t>(i)]));
    std::vector<double> sorted = mag;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const double baseline = sorted[sorted.size() / 2];
    const auto dip = static_cast<std::size_t>(std::min_element(mag.begin(), mag.end()) - mag.begin());
    const double half = baseline - 0.5 * (baseline - mag[dip]);
    std::size_t l = dip, r = dip;
    while (l > 0 && mag[l] < half) --l;
    while (r + 1 < mag.size() && mag[r] < half) ++r;
    const auto fi = [&](std::size_t j) { return f[static_cast<std::size_t>(first) + j]; };
    const double width = std::max(fi(r) - fi(l), f[1] - f[0]);
    const double centre = fi(dip);
    auto w = slice(trace, std::max(lo, centre - 10.0 * width), std::min(hi, centre + 10.0 * width));
    if (w.size() < kMinTracePoints) w = slice(trace, lo, hi);
    if (!trace.label.empty()) w.label = trace.label + "#" + std::to_string(k + 1);
    out.push_back(std::move(w));
  }
  return out;
}

namespace serial {
std::vector<NotchFitResult> extract_batch(std::span<const FrequencyTrace> traces,
                                          const ExtractOptions& options) {
  std::vector<NotchFitResult> out;
  out.reserve(traces.size());
  for (const auto& t : traces) out.push_back(extract_notch(t, options));
  return out;
}
}  // namespace serial

namespace omp {
std::vector<NotchFitResult> extract_batch(std::span<const FrequencyTrace> traces,
                                          const ExtractOptions& options) {
  const auto n = static_cast<std::ptrdiff_t>(traces.size());
  std::vector<NotchFitResult> out(traces.size());
  std::vector<std::exception_ptr> errors(traces.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = extract_notch(traces[static_cast<std::size_t>(i)], options);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}
}  // namespace omp

}  // namespace tadpole::fit
