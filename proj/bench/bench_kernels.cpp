// Serial reference against the OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "parisian/kernels.hpp"
#include "parisian/simulator.hpp"

using namespace parisian;

namespace {

ProblemSpec cl_spec() { return ProblemSpec{CramerLundberg{3.0, 2.0, 1.0}, 0.25, 0.05, 2.0, 1.0}; }

Execution exec(const benchmark::State& state) {
    return state.range(0) ? Execution::Parallel : Execution::Serial;
}

void BM_EvaluateV(benchmark::State& state) {
    const ParisianScale ps(cl_spec());
    const auto xs = kernels::linspace(-7.0, 15.0, 20000);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::evaluate_V(ps, xs, exec(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(xs.size()));
}

void BM_MinGOnGrid(benchmark::State& state) {
    const ParisianScale ps(cl_spec());
    const auto xs = kernels::linspace(0.0, 20.0, 2000);
    const auto vs = kernels::evaluate_V(ps, xs);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::min_g_on_grid(xs, vs, 1.0, exec(state)));
}

void BM_ExitFunctional(benchmark::State& state) {
    SimulationConfig c;
    c.paths = 20000;
    c.exec = exec(state);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_exit_functional(cl_spec(), 1.0, 3.0, c));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.paths));
}

}  // namespace

BENCHMARK(BM_EvaluateV)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinGOnGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExitFunctional)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
