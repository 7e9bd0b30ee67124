#include "tadpole/s21.hpp"

#include <cmath>
#include <random>
#include <set>

#include "tadpole/constants.hpp"
#include "tadpole/errors.hpp"
#include "tadpole/trace_io.hpp"

namespace tadpole::s21 {

void NotchParams::validate() const {
  if (!(f_r > 0.0)) throw DomainError("notch params: f_r must be positive");
  if (!(q_loaded > 0.0)) throw DomainError("notch params: Q_L must be positive");
  if (!(q_ext_abs > 0.0)) throw DomainError("notch params: |Q_e| must be positive");
  if (!(amplitude > 0.0)) throw DomainError("notch params: amplitude must be positive");
  if (!std::isfinite(phi) || !std::isfinite(alpha) || !std::isfinite(delay)) {
    throw DomainError("notch params: phi, alpha and delay must be finite");
  }
  if (std::cos(phi) > 0.0 && !(1.0 / q_loaded - std::cos(phi) / q_ext_abs > 0.0)) {
    throw DomainError("notch params: Q_L > |Q_e|/cos(phi) implies non-positive Q_i");
  }
}

double NotchParams::q_internal() const {
  return 1.0 / (1.0 / q_loaded - std::cos(phi) / q_ext_abs);
}

kernels::Resonance NotchParams::resonance() const {
  return {f_r, q_loaded, std::polar(q_loaded / q_ext_abs, phi)};
}

kernels::Environment NotchParams::environment() const {
  return {std::polar(amplitude, alpha), delay};
}

complex s21_model(double f, const NotchParams& p) {
  const auto r = p.resonance();
  complex out;
  kernels::serial::notch_response({&f, 1}, {&r, 1}, p.environment(), {&out, 1});
  return out;
}

void add_noise(FrequencyTrace& trace, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw DomainError("noise sigma must be non-negative");
  trace.attributes["noise_algorithm"] = kNoiseAlgorithm;
  trace.attributes["noise_seed"] = std::to_string(seed);
  trace.attributes["noise_sigma"] = io::format_double(sigma);
  if (sigma == 0.0) return;
  std::mt19937_64 gen(seed);
  constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
  for (auto& z : trace.s21) {
    const double u1 = static_cast<double>((gen() >> 11) + 1) * kInv53;  // (0, 1]
    const double u2 = static_cast<double>(gen() >> 11) * kInv53;        // [0, 1)
    const double rad = sigma * std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * constants::pi * u2;
    z += complex{rad * std::cos(ang), rad * std::sin(ang)};
  }
}

FrequencyTrace synthesize_trace(const NotchParams& p, std::span<const double> grid, double sigma,
                                std::uint64_t seed) {
  p.validate();
  if (!(sigma >= 0.0)) throw DomainError("synthesize_trace: sigma must be non-negative");
  const auto r = p.resonance();
  FrequencyTrace t;
  t.frequency.assign(grid.begin(), grid.end());
  t.s21.resize(grid.size());
  kernels::omp::notch_response(grid, {&r, 1}, p.environment(), t.s21);
  t.validate();
  add_noise(t, sigma, seed);
  return t;
}

FrequencyTrace compose_multiplexed(std::span<const NotchParams> params, std::span<const double> grid) {
  if (params.empty()) throw DomainError("compose_multiplexed: at least one resonator required");
  std::set<double> seen;
  std::vector<kernels::Resonance> res;
  for (const auto& p : params) {
    p.validate();
    if (!seen.insert(p.f_r).second) {
      throw DomainError("compose_multiplexed: duplicate resonance frequency " + io::format_double(p.f_r));
    }
    if (p.amplitude != params[0].amplitude || p.alpha != params[0].alpha || p.delay != params[0].delay) {
      throw DomainError("compose_multiplexed: resonators must share amplitude, alpha and delay");
    }
    res.push_back(p.resonance());
  }
  FrequencyTrace t;
  t.frequency.assign(grid.begin(), grid.end());
  t.s21.resize(grid.size());
  kernels::omp::notch_response(grid, res, params[0].environment(), t.s21);
  t.validate();
  return t;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw DomainError("linear_grid: need n >= 2 and hi > lo");
  std::vector<double> g(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

std::vector<double> linewidth_grid(const NotchParams& p, double linewidths, std::size_t n) {
  if (!(linewidths > 0.0)) throw DomainError("linewidth_grid: span must be positive");
  const double half = linewidths * p.f_r / p.q_loaded;
  return linear_grid(p.f_r - half, p.f_r + half, n);
}

}  // namespace tadpole::s21
