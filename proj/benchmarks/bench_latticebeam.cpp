#include <benchmark/benchmark.h>

#include "latticebeam/latticebeam.hpp"

namespace {

using namespace latticebeam;

const design::LatticeSpec kRubidium(0.78, 0.8);

void BM_BesselSequence(benchmark::State& state) {
    const int n_max = static_cast<int>(state.range(0));
    double x = 0.0;
    for (auto _ : state) {
        x = x < 40.0 ? x + 0.37 : 0.1;
        benchmark::DoNotOptimize(specfun::bessel_j_sequence(n_max, x));
    }
}
BENCHMARK(BM_BesselSequence)->Arg(12)->Arg(100)->Arg(512);

void BM_SolveDesign(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(design::solve_design(kRubidium, m));
}
BENCHMARK(BM_SolveDesign)->DenseRange(1, 6)->Arg(16);

void BM_CrosstalkReport(benchmark::State& state) {
    const auto d = design::solve_design(kRubidium, 6);
    for (auto _ : state) benchmark::DoNotOptimize(design::crosstalk_report(d));
}
BENCHMARK(BM_CrosstalkReport);

void BM_QuantizedCrosstalk(benchmark::State& state) {
    const auto waves = synthesis::synthesize_waves(design::solve_design(kRubidium, 6), 256);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            synthesis::lattice_crosstalk(synthesis::quantize(waves, {14, 14}), kRubidium, 50));
    }
}
BENCHMARK(BM_QuantizedCrosstalk);

void BM_RasterSynthesis(benchmark::State& state) {
    const auto waves = synthesis::PlaneWaveSet::uniform(kRubidium.wavenumber(), 100);
    const auto grid = raster::GridSpec::centered(static_cast<double>(state.range(0)), 0.05);
    for (auto _ : state) benchmark::DoNotOptimize(raster::raster_field(waves, grid));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.nx() * grid.ny()));
}
BENCHMARK(BM_RasterSynthesis)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_RasterDesign(benchmark::State& state) {
    const auto d = design::solve_design(kRubidium, 6);
    const auto grid = raster::GridSpec::centered(5.0, 0.05);
    for (auto _ : state) benchmark::DoNotOptimize(raster::raster_field(d, grid));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.nx() * grid.ny()));
}
BENCHMARK(BM_RasterDesign)->Unit(benchmark::kMillisecond);

void BM_RingAnalysis(benchmark::State& state) {
    const auto waves = synthesis::PlaneWaveSet::uniform(kRubidium.wavenumber(), static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(synthesis::ring_analysis(waves));
}
BENCHMARK(BM_RingAnalysis)->Arg(100)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
