#include <benchmark/benchmark.h>

#include "pgrad/bounds.hpp"
#include "pgrad/radial_families.hpp"
#include "pgrad/radial_ode.hpp"
#include "pgrad/singularity.hpp"

namespace {

const pgrad::ProblemParams canonical(3, 2.0, 4.0 / 3.0);

void BM_EvaluateStrongSingular(benchmark::State& state) {
  const auto desc = pgrad::make_strong_singular(canonical);
  const auto grid = pgrad::geometric_grid(1e-4, 1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pgrad::evaluate_family(desc, grid));
  }
}
BENCHMARK(BM_EvaluateStrongSingular)->Arg(64)->Arg(256);

void BM_IntegrateDirect(benchmark::State& state) {
  const auto grid = pgrad::geometric_grid(0.05, 1.0, 32);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pgrad::integrate_direct(canonical, 1.0, 0.0, -1.0, 0.05, pgrad::OdeSpec{}, grid));
  }
}
BENCHMARK(BM_IntegrateDirect);

void BM_CalibrateLambda(benchmark::State& state) {
  const auto consts = pgrad::BernsteinConstants::defaults(canonical);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pgrad::calibrate_lambda(canonical, 1.0, consts));
  }
}
BENCHMARK(BM_CalibrateLambda);

void BM_Classify(benchmark::State& state) {
  const auto prof = pgrad::evaluate_family(pgrad::make_regular_flux(canonical, 2.0),
                                           pgrad::geometric_grid(1e-7, 1e-2, 32));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pgrad::classify(prof, canonical, 1e-6, 1e-3));
  }
}
BENCHMARK(BM_Classify);

}  // namespace

BENCHMARK_MAIN();
