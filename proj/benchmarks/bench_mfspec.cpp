#include <benchmark/benchmark.h>

#include "mfspec/fft.hpp"
#include "mfspec/mfdfa.hpp"
#include "mfspec/spectral.hpp"
#include "mfspec/synthetic.hpp"

using namespace mfspec;

static void BM_FftPow2(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = gaussian_white_noise(n, {1, 0});
    std::vector<fft::Complex> c(x.values.begin(), x.values.end());
    for (auto _ : state) benchmark::DoNotOptimize(fft::transform(c, -1));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FftPow2)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity(benchmark::oNLogN);

// Bluestein path: hourly years are rarely a power of two.
static void BM_FftHourlyYear(benchmark::State& state) {
    const auto x = gaussian_white_noise(8760, {1, 0});
    std::vector<fft::Complex> c(x.values.begin(), x.values.end());
    for (auto _ : state) benchmark::DoNotOptimize(fft::transform(c, -1));
}
BENCHMARK(BM_FftHourlyYear);

static void BM_Decompose(benchmark::State& state) {
    auto x = fgn(1 << 16, 0.7, {2, 0});
    for (std::size_t i = 0; i < x.size(); ++i) x.values[i] += 5.0 * std::sin(2.0 * M_PI * static_cast<double>(i) / 24.0);
    for (auto _ : state) benchmark::DoNotOptimize(decompose(x));
}
BENCHMARK(BM_Decompose)->Unit(benchmark::kMillisecond);

static void BM_PlainSurface(benchmark::State& state) {
    const auto x = fgn(1 << 16, 0.7, {3, 0});
    MfdfaConfig cfg;
    cfg.poly_order = static_cast<int>(state.range(0));
    cfg = resolve_config(cfg, x.size());
    for (auto _ : state) benchmark::DoNotOptimize(plain_surface(x, cfg));
}
BENCHMARK(BM_PlainSurface)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_ShuffledEnsemble(benchmark::State& state) {
    const auto x = fgn(1 << 14, 0.7, {4, 0});
    MfdfaConfig cfg;
    cfg.n_shuffles = 8;
    cfg.threads = static_cast<std::size_t>(state.range(0));
    cfg = resolve_config(cfg, x.size());
    for (auto _ : state) benchmark::DoNotOptimize(ensemble_surface(x, cfg, SurfaceFlavor::Shuffled, {4, 1}));
}
BENCHMARK(BM_ShuffledEnsemble)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
