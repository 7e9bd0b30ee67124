#include <vector>

#include "kernel_points.hpp"

namespace tadpole::kernels::omp {

namespace {

std::size_t block_count(std::size_t n) { return (n + kReductionBlock - 1) / kReductionBlock; }

// Sums fn over fixed blocks in parallel, then folds the block partials in order.
template <typename T, typename BlockFn, typename Merge>
T blocked_reduce(std::size_t n, BlockFn block_fn, Merge merge) {
  const std::size_t nb = block_count(n);
  std::vector<T> partial(nb);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(lo + kReductionBlock, n);
    partial[static_cast<std::size_t>(b)] = block_fn(lo, hi);
  }
  T total{};
  for (const auto& p : partial) merge(total, p);
  return total;
}

}  // namespace

void notch_response(std::span<const double> freq, std::span<const Resonance> resonances,
                    const Environment& env, std::span<complex> out) {
  const auto n = static_cast<std::ptrdiff_t>(freq.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = detail::notch_point(freq[i], resonances, env);
}

void remove_delay(std::span<const double> freq, std::span<const complex> in, double tau,
                  std::span<complex> out) {
  const auto n = static_cast<std::ptrdiff_t>(freq.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = detail::undelay_point(freq[i], in[i], tau);
}

complex mean(std::span<const complex> z) {
  const complex s = blocked_reduce<complex>(
      z.size(),
      [&](std::size_t lo, std::size_t hi) {
        complex acc{0.0, 0.0};
        for (std::size_t i = lo; i < hi; ++i) acc += z[i];
        return acc;
      },
      [](complex& a, const complex& b) { a += b; });
  return s / static_cast<double>(z.size());
}

CircleMoments circle_moments(std::span<const complex> z, complex origin) {
  return blocked_reduce<CircleMoments>(
      z.size(),
      [&](std::size_t lo, std::size_t hi) {
        CircleMoments m;
        for (std::size_t i = lo; i < hi; ++i) detail::accumulate_moments(m, z[i], origin);
        return m;
      },
      [](CircleMoments& a, const CircleMoments& b) { detail::merge(a, b); });
}

double radial_sse(std::span<const complex> z, complex center, double radius) {
  return blocked_reduce<double>(
      z.size(),
      [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += detail::radial_residual_sq(z[i], center, radius);
        return s;
      },
      [](double& a, double b) { a += b; });
}

}  // namespace tadpole::kernels::omp
