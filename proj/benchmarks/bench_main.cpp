// Microbenchmarks for the hot paths of the replicate engine: sampling,
// parity-grid construction and the two exact integrators.

#include <benchmark/benchmark.h>

#include "sheetlab/donsker.hpp"
#include "sheetlab/kac_stroock.hpp"
#include "sheetlab/mc.hpp"
#include "sheetlab/stats.hpp"

using namespace sheetlab;

namespace {

SimpleFunction bench_integrand(std::size_t d) {
  const Point box = Point::ones(d);
  if (d == 1) {
    return SimpleFunction(box, {{1.0, Rect(Point({0.0}), Point({0.5}))},
                                {-0.5, Rect(Point({0.5}), Point({0.75}))},
                                {2.0, Rect(Point({0.75}), Point({1.0}))}});
  }
  return SimpleFunction(box, {{1.0, Rect(Point({0.0, 0.0}), Point({0.5, 0.5}))},
                              {-0.5, Rect(Point({0.5, 0.25}), Point({1.0, 0.75}))},
                              {2.0, Rect(Point({0.0, 0.5}), Point({0.5, 1.0}))}});
}

void BM_LatticeFieldSample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const Point box = Point::ones(d);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const auto field =
        sample_lattice_field(n, box, InnovationLaw::rademacher, StreamKey{1, rep++, 0});
    benchmark::DoNotOptimize(field.values().data());
  }
  state.SetItemsProcessed(state.iterations() * (d == 1 ? n : n * n));
}
BENCHMARK(BM_LatticeFieldSample)->Args({64, 1})->Args({64, 2})->Args({256, 1});

void BM_DonskerIntegratorApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const auto f = bench_integrand(d);
  const DonskerIntegrator integrator(f, n);
  std::vector<double> z(integrator.cell_count());
  Rng rng(StreamKey{2, 0, 0});
  fill_innovations(z, InnovationLaw::rademacher, rng);
  for (auto _ : state) benchmark::DoNotOptimize(integrator.apply(z));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(z.size()));
}
BENCHMARK(BM_DonskerIntegratorApply)->Args({64, 2})->Args({256, 1});

void BM_PoissonSheetSample(benchmark::State& state) {
  const double intensity = static_cast<double>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const Point box = Point::ones(d);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const auto sheet = sample_poisson_sheet(intensity, box, StreamKey{3, rep++, 0});
    benchmark::DoNotOptimize(sheet.flat().data());
  }
}
BENCHMARK(BM_PoissonSheetSample)->Args({64, 1})->Args({64, 2})->Args({200, 1});

void BM_ParityGridBuild(benchmark::State& state) {
  const double intensity = static_cast<double>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const Point box = Point::ones(d);
  const auto sheet = sample_poisson_sheet(intensity, box, StreamKey{4, 9, 0});
  for (auto _ : state) {
    const ParityCellGrid grid(sheet, 10'000'000);
    benchmark::DoNotOptimize(grid.bits().data());
  }
}
BENCHMARK(BM_ParityGridBuild)->Args({64, 2})->Args({200, 1});

void BM_KacIntegrateReplicate(benchmark::State& state) {
  // full replicate: sample sheet, build grid, integrate
  const double intensity = static_cast<double>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const auto f = bench_integrand(d);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    KacStroockKernel kern(sample_poisson_sheet(intensity, f.box(), StreamKey{5, rep++, 0}));
    benchmark::DoNotOptimize(kern.integrate(f));
  }
}
BENCHMARK(BM_KacIntegrateReplicate)->Args({64, 2})->Args({200, 1});

void BM_KsTest(benchmark::State& state) {
  const auto reps = static_cast<std::size_t>(state.range(0));
  std::vector<double> samples(reps);
  Rng rng(StreamKey{6, 0, 0});
  for (auto& v : samples) v = rng.normal();
  for (auto _ : state) {
    const auto rep = ks_test(samples, 1.0, 0.01);
    benchmark::DoNotOptimize(rep.statistic);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(reps));
}
BENCHMARK(BM_KsTest)->Arg(50000);

void BM_SimulateIntegrals(benchmark::State& state) {
  // end-to-end: 1000 replicates of the d=2 sign-flip integral at n=32
  const auto f = bench_integrand(2);
  std::uint64_t salt = 0;
  for (auto _ : state) {
    const auto samples = simulate_integrals({KernelFamily::kac_stroock, f, 32},
                                            StreamKey{7, 0, salt++}, 1000, 2);
    benchmark::DoNotOptimize(samples.data());
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SimulateIntegrals);

}  // namespace

BENCHMARK_MAIN();
