// Serial reference path against the OpenMP path for each kernel that fans out.
// Argument 0 selects Execution::serial, 1 selects Execution::parallel.

#include <benchmark/benchmark.h>

#include "scatterlab/born.hpp"
#include "scatterlab/diagnostics.hpp"
#include "scatterlab/eikonal.hpp"
#include "scatterlab/partialwave.hpp"
#include "scatterlab/propagator.hpp"

using namespace scatterlab;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::serial : Execution::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_SplitStep(benchmark::State& state) {
    propagator::GridSpec grid;
    grid.n = 1 << 14;
    grid.dx = 0.25;
    const auto f = propagator::gaussian_packet(grid, -40.0, 4.0, 2.0);
    propagator::EvolutionConfig cfg;
    cfg.model = PotentialModel::gaussian_well(-0.3, 1.0);
    cfg.dt = 0.004;
    for (auto _ : state) benchmark::DoNotOptimize(propagator::split_step_evolve(f, cfg, 0.4, mode(state)));
    label(state);
}

void BM_FreeEvolve(benchmark::State& state) {
    const auto f = propagator::gaussian_packet(propagator::default_line_grid(), -40.0, 4.0, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(propagator::free_evolve(f, 50.0, mode(state)));
    label(state);
}

void BM_PhaseShiftTable(benchmark::State& state) {
    const auto m = PotentialModel::gaussian_well(-1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(partialwave::phase_shift_table(m, 2.0, 25, {}, mode(state)));
    label(state);
}

void BM_TransportCoefficients(benchmark::State& state) {
    const auto m = PotentialModel::gaussian_well(-1.0, 1.0);
    const std::vector<Vec3> pts{{1.0, 0.0, 0.5}, {2.0, 0.0, -1.0}};
    for (auto _ : state)
        benchmark::DoNotOptimize(born::transport_coefficients(m, {0.0, 0.0, 1.0}, pts, 2, {}, mode(state)));
    label(state);
}

void BM_S0Kernel(benchmark::State& state) {
    const auto m = PotentialModel::gaussian_well(-1.0, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(eikonal::s0_kernel(m, 49.0, {std::sin(0.2), 0.0, std::cos(0.2)},
                                                    {-std::sin(0.2), 0.0, std::cos(0.2)}, {0.0, 0.0, 1.0}, 1, {},
                                                    mode(state)));
    label(state);
}

void BM_KatoIntegral(benchmark::State& state) {
    propagator::GridSpec grid;
    grid.n = 1 << 12;
    grid.dx = 0.25;
    const auto f = propagator::gaussian_packet(grid, -40.0, 4.0, 2.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(diagnostics::kato_smoothness_integral(1.0, f, {20.0, 40.0}, mode(state)));
    label(state);
}

void BM_LapProbe(benchmark::State& state) {
    const auto zero = PotentialModel::zero();
    for (auto _ : state) benchmark::DoNotOptimize(diagnostics::lap_probe(zero, 1.0, 1.0, {3e-3, 1e-3}, {}, mode(state)));
    label(state);
}

}  // namespace

BENCHMARK(BM_SplitStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FreeEvolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PhaseShiftTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransportCoefficients)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_S0Kernel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_KatoIntegral)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LapProbe)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
