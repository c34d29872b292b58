#include <benchmark/benchmark.h>

#include <random>

#include "tmadf/io.hpp"
#include "tmadf/pipeline.hpp"

namespace {

tmadf::Scenario reference(const char* name = "table1.json") {
    return tmadf::load_scenario(std::string(TMADF_CONFIG_DIR) + "/" + name);
}

void BM_Synthesize(benchmark::State& state) {
    const auto s = reference();
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(tmadf::synthesize(s, 0.0, n));
    state.SetItemsProcessed(state.iterations() * state.range(0) * s.element_count());
}
BENCHMARK(BM_Synthesize)->Arg(1280)->Arg(6400)->Arg(225280);

void BM_ModulateAndCombine(benchmark::State& state) {
    const auto s = reference();
    const auto signals = tmadf::synthesize(s, 0.0, 6400);
    for (auto _ : state) benchmark::DoNotOptimize(tmadf::modulate_and_combine(signals, 1250.0));
}
BENCHMARK(BM_ModulateAndCombine);

void BM_ExtractLine(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    tmadf::ComplexSeries x{0.0, 1.6e6, {}};
    for (int i = 0; i < 1280; ++i) x.samples.emplace_back(g(rng), g(rng));
    for (auto _ : state) benchmark::DoNotOptimize(tmadf::extract_line(x, 0, 1280, 6250.0));
}
BENCHMARK(BM_ExtractLine);

void BM_Eigen(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    tmadf::CMatrix a(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < 2 * n; ++j) a(i, j) = {g(rng), g(rng)};
    const auto r = tmadf::sample_covariance(a);
    for (auto _ : state) benchmark::DoNotOptimize(tmadf::hermitian_eigendecomposition(r.values));
}
BENCHMARK(BM_Eigen)->Arg(4)->Arg(8)->Arg(16);

void BM_MusicSpectrum(benchmark::State& state) {
    const auto s = reference();
    const auto stage = tmadf::run_snapshot_stage(s);
    const auto r = tmadf::sample_covariance(stage.snapshots);
    const auto grid = tmadf::make_grid();
    for (auto _ : state) benchmark::DoNotOptimize(tmadf::music_spectrum(r, 3, s.geometry(), grid));
}
BENCHMARK(BM_MusicSpectrum);

void BM_ReferencePipeline(benchmark::State& state) {
    const auto s = reference();
    for (auto _ : state) benchmark::DoNotOptimize(tmadf::run_pipeline(s));
}
BENCHMARK(BM_ReferencePipeline)->Unit(benchmark::kMillisecond);

void BM_SpreadWindowPipeline(benchmark::State& state) {
    const auto s = reference("table1_decorrelated.json");
    for (auto _ : state) benchmark::DoNotOptimize(tmadf::run_pipeline(s));
}
BENCHMARK(BM_SpreadWindowPipeline)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
