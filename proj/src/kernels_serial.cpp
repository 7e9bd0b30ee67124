#include "kernel_points.hpp"

namespace tadpole::kernels::serial {

void notch_response(std::span<const double> freq, std::span<const Resonance> resonances,
                    const Environment& env, std::span<complex> out) {
  for (std::size_t i = 0; i < freq.size(); ++i) out[i] = detail::notch_point(freq[i], resonances, env);
}

void remove_delay(std::span<const double> freq, std::span<const complex> in, double tau,
                  std::span<complex> out) {
  for (std::size_t i = 0; i < freq.size(); ++i) out[i] = detail::undelay_point(freq[i], in[i], tau);
}

complex mean(std::span<const complex> z) {
  complex s{0.0, 0.0};
  for (const auto& v : z) s += v;
  return s / static_cast<double>(z.size());
}

CircleMoments circle_moments(std::span<const complex> z, complex origin) {
  CircleMoments m;
  for (const auto& v : z) detail::accumulate_moments(m, v, origin);
  return m;
}

double radial_sse(std::span<const complex> z, complex center, double radius) {
  double s = 0.0;
  for (const auto& v : z) s += detail::radial_residual_sq(v, center, radius);
  return s;
}

}  // namespace tadpole::kernels::serial
