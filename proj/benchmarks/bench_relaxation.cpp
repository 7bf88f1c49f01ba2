#include <benchmark/benchmark.h>

#include "nlfp/convq.hpp"
#include "nlfp/kernels.hpp"

using namespace nlfp;

static void RelaxationSolveUniform(benchmark::State& state) {
  const auto kernel = kernels::KernelSpec::fractional(0.5);
  const auto grid = convq::TimeGrid::uniform(10.0 / (double)state.range(0), state.range(0));
  const convq::ConvolutionWeights weights(kernel, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(convq::solve_relaxation(weights, 1.0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(RelaxationSolveUniform)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

static void WeightBuildDistributedGeometric(benchmark::State& state) {
  const auto kernel = kernels::KernelSpec::distributed_order();
  const auto grid = convq::TimeGrid::geometric(0.01, 1.05, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(convq::ConvolutionWeights(kernel, grid));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(WeightBuildDistributedGeometric)->RangeMultiplier(2)->Range(64, 512)->Complexity();
