#include "chainglue/adiabatic.hpp"
#include "chainglue/gluing.hpp"

#include <benchmark/benchmark.h>

using namespace chainglue;

static void BM_Eigendecompose(benchmark::State& state) {
  const ChainHamiltonian h = tfim_chain(static_cast<int>(state.range(0)), 1.0, 1.5, false);
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(h));
}
BENCHMARK(BM_Eigendecompose)->DenseRange(4, 9)->Unit(benchmark::kMillisecond);

static void BM_SpectralGenerator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HamiltonianPath p =
      linear_path(tfim_chain(n, 1.0, 1.0, false).dense, tfim_chain(n, 1.0, 2.0, false).dense);
  const Filter f = Filter::make(FilterKind::gaussian, 2.0);
  const EigenDecomposition d = eigendecompose(p.H_of_s(0.5));
  for (auto _ : state) benchmark::DoNotOptimize(qa_generator_spectral(p, 0.5, f, d));
}
BENCHMARK(BM_SpectralGenerator)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_QuadratureGenerator(benchmark::State& state) {
  const HamiltonianPath p =
      linear_path(tfim_chain(3, 1.0, 1.0, false).dense, tfim_chain(3, 1.0, 2.0, false).dense);
  const Filter f = Filter::make(FilterKind::gaussian, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(qa_generator_quadrature(p, 0.5, f, 20.0, 2048));
}
BENCHMARK(BM_QuadratureGenerator)->Unit(benchmark::kMillisecond);

static void BM_EvolvePath(benchmark::State& state) {
  const HamiltonianPath p =
      linear_path(tfim_chain(4, 1.0, 1.0, false).dense, tfim_chain(4, 1.0, 2.0, false).dense);
  const Filter f = Filter::make(FilterKind::gaussian, 1.0);
  const GeneratorProvider g = [&](double s) {
    return qa_generator_spectral(p, s, f, eigendecompose(p.H_of_s(s)));
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_path(g, {static_cast<int>(state.range(0)), StepOrder::midpoint}));
  }
}
BENCHMARK(BM_EvolvePath)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_GlueOnce(benchmark::State& state) {
  const SplitSystem sp = split(tfim_family(1.0, 1.5), 4, 2);
  GlueParams params;
  params.steps = static_cast<int>(state.range(0));
  params.gamma = 8.0;
  for (auto _ : state) benchmark::DoNotOptimize(glue_once(sp, params));
}
BENCHMARK(BM_GlueOnce)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
