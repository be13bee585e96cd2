#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "butterfly/critical.hpp"
#include "butterfly/oracle.hpp"
#include "butterfly/parallel.hpp"

using namespace butterfly;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void label(benchmark::State& state) {
    state.SetLabel(state.range(0) ? "openmp x" + std::to_string(max_threads()) : "serial");
}

void BM_ReturnsTo1(benchmark::State& state) {
    const auto p = ModelParams::reference();
    const double beta = 0.5, z = pressure_full(p, beta).value + 0.2;
    EnumerationOptions o;
    o.exec.execution = mode(state);
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_returns_to_1(p, beta, z, 20, o));
    label(state);
}

void BM_ReturnsTo32(benchmark::State& state) {
    const auto p = ModelParams::reference();
    const double beta = 0.5;
    const double z = pressure_34(p, beta) + 0.2 + composition_gap(p, beta, 1).value_or(0.0);
    EnumerationOptions o;
    o.exec.execution = mode(state);
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_returns_to_32(p, beta, z, 18, o));
    label(state);
}

void BM_PeriodicOrbits(benchmark::State& state) {
    const auto p = ModelParams::reference();
    ExecutionOptions o;
    o.execution = mode(state);
    for (auto _ : state) benchmark::DoNotOptimize(periodic_orbit_pressure(p, 0.5, 12, Subsystem::full, o));
    label(state);
}

void BM_CheckLn(benchmark::State& state) {
    const auto p = ModelParams::reference();
    for (auto _ : state) benchmark::DoNotOptimize(check_ln(p, 1.0, 20, mode(state)));
    label(state);
}

void BM_PressureCurve(benchmark::State& state) {
    const auto p = ModelParams::reference();
    const auto c = critical_set(p);
    std::vector<double> betas;
    for (int i = 0; i <= 300; ++i) betas.push_back(0.01 * i);
    for (auto _ : state) benchmark::DoNotOptimize(pressure_curve(p, c, betas, mode(state)));
    label(state);
}

}  // namespace

BENCHMARK(BM_ReturnsTo1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReturnsTo32)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PeriodicOrbits)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckLn)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PressureCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
    apply_thread_env();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
