#include <benchmark/benchmark.h>

#include "anelor/dynamics.hpp"
#include "anelor/lorenz_reduction.hpp"
#include "anelor/projection.hpp"
#include "anelor/spectral_validation.hpp"

namespace {

using namespace anelor;

PhysicalParams sample(double beta) {
  PhysicalParams p;
  p.beta = beta;
  p.rayleigh = 900.0;
  return p;
}

void BM_OracleCoefficients(benchmark::State& state) {
  const QuadratureRule rule(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle_coefficients(sample(0.5), rule));
}
BENCHMARK(BM_OracleCoefficients)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ClosedFormCoefficients(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(closed_form_coefficients(sample(0.5)));
}
BENCHMARK(BM_ClosedFormCoefficients);

void BM_CriticalRayleigh(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(critical_rayleigh(sample(0.5)));
}
BENCHMARK(BM_CriticalRayleigh)->Unit(benchmark::kMillisecond);

void BM_MinimizeOverLength(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(minimize_over_length(0.0, 10.0, 4.0 / 3.0));
}
BENCHMARK(BM_MinimizeOverLength)->Unit(benchmark::kMillisecond);

void BM_AssemblePencil(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_pencil(sample(0.5), 1, n));
}
BENCHMARK(BM_AssemblePencil)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_LeadingGrowthRate(benchmark::State& state) {
  const auto pencil = assemble_pencil(sample(0.5), 1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(leading_growth_rate(pencil, 900.0));
}
BENCHMARK(BM_LeadingGrowthRate)->Arg(1)->Arg(4)->Arg(8);

void BM_IntegrateLorenz(benchmark::State& state) {
  const LorenzParams lp{10.0, 28.0, 8.0 / 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(integrate_lorenz(lp, {1.0, 1.0, 1.0}, 20.0, 1e-10, 1e-12, 201));
}
BENCHMARK(BM_IntegrateLorenz)->Unit(benchmark::kMillisecond);

void BM_IntegrateReduced(benchmark::State& state) {
  const GalerkinCoeffs c = oracle_coefficients(sample(0.3));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_reduced(c, {0.1, 0.1, 0.1}, 5.0, 1e-10, 1e-12, 201));
}
BENCHMARK(BM_IntegrateReduced)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
