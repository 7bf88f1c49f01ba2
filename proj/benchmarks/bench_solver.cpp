#include <benchmark/benchmark.h>

#include "nlfp/fpsolver.hpp"

using namespace nlfp;

static void NonlocalSolverRun(benchmark::State& state) {
  fpsolver::ExperimentConfig cfg;
  cfg.kernel = kernels::KernelSpec::fractional(0.5);
  cfg.scheme = fpsolver::Scheme::Nonlocal;
  cfg.space = SpatialGrid{8.0, 200};
  cfg.time = convq::TimeGrid::uniform(0.05, (std::size_t)state.range(0));
  cfg.u0 = fpsolver::HermiteInit{1, 0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpsolver::run_experiment(cfg));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(NonlocalSolverRun)->RangeMultiplier(2)->Range(64, 512)->Complexity()->Unit(benchmark::kMillisecond);

static void BackwardDifferenceStep(benchmark::State& state) {
  const SpatialGrid grid{8.0, (std::size_t)state.range(0)};
  const auto potential = fpsolver::Potential1D::quadratic(1.0);
  const auto op = fpsolver::build_spatial_operator(potential, grid);
  Field1D u = fpsolver::discrete_gibbs(potential, grid);
  for (auto _ : state) {
    u = fpsolver::step_backward_difference(u, 0.05, op);
    benchmark::DoNotOptimize(u);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BackwardDifferenceStep)->RangeMultiplier(4)->Range(100, 6400)->Complexity();
