// Serial reference kernels against their OpenMP versions, plus batch fitting.
// Run: ./build/bench/kernel_bench --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "tadpole/kernels.hpp"
#include "tadpole/notch_fit.hpp"
#include "tadpole/s21.hpp"

using namespace tadpole;

namespace {

struct Workload {
  std::vector<double> f;
  std::vector<complex> z;
  std::vector<complex> out;
  std::vector<kernels::Resonance> res;
};

Workload make_workload(std::size_t n) {
  Workload w;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    w.f.push_back(4e8 + 10.0 * static_cast<double>(i));
    w.z.emplace_back(g(rng), g(rng));
  }
  w.out.resize(n);
  for (int k = 0; k < 6; ++k) w.res.push_back({4e8 + 1e6 * k, 5000.0, std::polar(0.3, 0.1 * k)});
  return w;
}

const kernels::Environment kEnv{std::polar(0.8, 1.0), 30e-9};

template <bool Parallel>
void BM_NotchResponse(benchmark::State& state) {
  auto w = make_workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel) kernels::omp::notch_response(w.f, w.res, kEnv, w.out);
    else kernels::serial::notch_response(w.f, w.res, kEnv, w.out);
    benchmark::DoNotOptimize(w.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_RemoveDelay(benchmark::State& state) {
  auto w = make_workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel) kernels::omp::remove_delay(w.f, w.z, 30e-9, w.out);
    else kernels::serial::remove_delay(w.f, w.z, 30e-9, w.out);
    benchmark::DoNotOptimize(w.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_CircleMoments(benchmark::State& state) {
  auto w = make_workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto m = Parallel ? kernels::omp::circle_moments(w.z, {0.1, 0.1})
                      : kernels::serial::circle_moments(w.z, {0.1, 0.1});
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_ExtractBatch(benchmark::State& state) {
  std::vector<FrequencyTrace> traces;
  for (int i = 0; i < state.range(0); ++i) {
    s21::NotchParams p{5e8, 5000.0, 50000.0, 0.2, 0.8, 1.0, 30e-9};
    traces.push_back(s21::synthesize_trace(p, s21::linewidth_grid(p, 5.0, 2001), 0.008,
                                           static_cast<std::uint64_t>(i)));
  }
  for (auto _ : state) {
    auto r = Parallel ? fit::omp::extract_batch(traces) : fit::serial::extract_batch(traces);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_NotchResponse<false>)->Name("notch_response/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_NotchResponse<true>)->Name("notch_response/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_RemoveDelay<false>)->Name("remove_delay/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_RemoveDelay<true>)->Name("remove_delay/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_CircleMoments<false>)->Name("circle_moments/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_CircleMoments<true>)->Name("circle_moments/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_ExtractBatch<false>)->Name("extract_batch/serial")->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractBatch<true>)->Name("extract_batch/omp")->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
