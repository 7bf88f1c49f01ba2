#include <benchmark/benchmark.h>

#include "nlfp/specfun.hpp"

static void MittagLefflerSeries(benchmark::State& state) {
  double y = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nlfp::specfun::mittag_leffler(0.6, -y));
    y = y < 4.0 ? y + 0.05 : 0.1;
  }
}
BENCHMARK(MittagLefflerSeries);

static void MittagLefflerAsymptotic(benchmark::State& state) {
  double y = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nlfp::specfun::mittag_leffler(0.6, -y));
    y = y < 1e4 ? y * 1.1 : 10.0;
  }
}
BENCHMARK(MittagLefflerAsymptotic);

static void GammaLanczos(benchmark::State& state) {
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nlfp::specfun::gamma(x));
    x = x < 150.0 ? x * 1.3 : 0.01;
  }
}
BENCHMARK(GammaLanczos);

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
