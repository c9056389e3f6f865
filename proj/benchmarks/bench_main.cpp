#include "mixedfrac/extension.hpp"
#include "mixedfrac/fields.hpp"
#include "mixedfrac/kernels.hpp"
#include "mixedfrac/solver.hpp"

#include <benchmark/benchmark.h>

using namespace mixedfrac;

namespace {

const Domain unit = Domain::interval(0.0, 1.0);
const Domain disk = Domain::disk(Point(0.0, 0.0), 0.5);

std::shared_ptr<const Representation> rep_for(const Domain& d, double h, double s) {
    const Grid g = build_grid(d, h, default_r_trunc(d));
    return make_representation(d, g, FracParams::make(d.dimension(), s));
}

void BM_Representation1D(benchmark::State& state) {
    const double h = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rep_for(unit, h, 0.5));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Representation1D)->RangeMultiplier(2)->Range(50, 400)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Representation2D(benchmark::State& state) {
    const double h = 2.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rep_for(disk, h, 0.5));
    }
}
BENCHMARK(BM_Representation2D)->Arg(12)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Extension(benchmark::State& state) {
    const auto rep = rep_for(unit, 1.0 / static_cast<double>(state.range(0)), 0.4);
    const GridFunction u = GridFunction::sample(rep->grid(), scalar_preset("cos(2)", unit));
    for (auto _ : state) {
        benchmark::DoNotOptimize(extend(u, *rep));
    }
}
BENCHMARK(BM_Extension)->Arg(100)->Arg(200)->Arg(400);

void BM_BoundaryFactor(benchmark::State& state) {
    const FracParams p = FracParams::make(2, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(boundary_factor(Point(0.51, 0.2), disk, p));
    }
}
BENCHMARK(BM_BoundaryFactor);

void BM_RegionalKernel(benchmark::State& state) {
    const FracParams p = FracParams::make(1, 0.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(regional_kernel(point1d(0.3), point1d(0.7), unit, p));
    }
}
BENCHMARK(BM_RegionalKernel);

void BM_DirectSolve(benchmark::State& state) {
    const auto rep = rep_for(unit, 1.0 / static_cast<double>(state.range(0)), 0.5);
    const Coefficients c{vector_preset("sin", unit), scalar_preset("1", unit), scalar_preset("cos(2)", unit)};
    const ProblemData pd = make_problem(*rep, c, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_fixed_gamma(assemble(rep, pd), *rep));
    }
}
BENCHMARK(BM_DirectSolve)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Continuation(benchmark::State& state) {
    const auto rep = rep_for(unit, 1.0 / static_cast<double>(state.range(0)), 0.5);
    const Coefficients c{vector_preset("sin", unit), scalar_preset("1", unit), scalar_preset("cos(2)", unit)};
    const ProblemData pd = make_problem(*rep, c, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(continuation_solve(rep, pd));
    }
}
BENCHMARK(BM_Continuation)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
