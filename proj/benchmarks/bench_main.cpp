#include "squeezelab/dicke.hpp"
#include "squeezelab/optimizer.hpp"
#include "squeezelab/ramsey.hpp"
#include "squeezelab/rng.hpp"
#include "squeezelab/sampler.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

namespace sl = squeezelab;

static void BM_RotationMatrix(benchmark::State& state) {
  const sl::DickeSpace space(static_cast<int>(state.range(0)));
  double angle = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sl::rotation_matrix(space, sl::Vec3::UnitY(), angle));
    angle += 1e-3;
  }
}
BENCHMARK(BM_RotationMatrix)->Arg(50)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_EvaluatorBetaSweep(benchmark::State& state) {
  const auto kind = state.range(0) == 1 ? sl::PreparationKind::sss1 : sl::PreparationKind::sss2;
  sl::NoiseEvaluator eval(kind, static_cast<int>(state.range(1)));
  eval.set_alpha(0.05);
  const sl::AngleGrid grid;
  for (auto _ : state) {
    double acc = 0.0;
    for (int j = 0; j < grid.n_beta; ++j) acc += eval.at_beta(grid.beta(j)).dp_d;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_EvaluatorBetaSweep)->Args({1, 50})->Args({2, 50})->Args({2, 1000})->Unit(benchmark::kMillisecond);

static void BM_ScanNoiseMap(benchmark::State& state) {
  const auto kind = state.range(0) == 1 ? sl::PreparationKind::sss1 : sl::PreparationKind::sss2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sl::scan_noise_map(kind, static_cast<int>(state.range(1)), {64, 64}));
  }
}
BENCHMARK(BM_ScanNoiseMap)->Args({1, 50})->Args({2, 50})->Unit(benchmark::kMillisecond);

static void BM_MonteCarlo(benchmark::State& state) {
  sl::RamseyConfig config;
  config.preparation = sl::PreparationSpec::squeezed(sl::PreparationKind::sss1, 0.02, 1.5);
  const auto method = state.range(0) == 0 ? sl::SamplerMethod::inverse_cdf : sl::SamplerMethod::rejection;
  const sl::SeededRng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sl::monte_carlo_ramsey(config, 10000, rng, method));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
