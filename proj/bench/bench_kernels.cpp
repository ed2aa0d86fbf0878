// Parallel lattice kernels against the serial double-loop reference.
#include <benchmark/benchmark.h>

#include "muskat/kernels.hpp"
#include "muskat/potentials.hpp"
#include "muskat/reference.hpp"
#include "muskat/resolvent.hpp"

namespace {

struct Case {
    muskat::GridSpec grid;
    muskat::ScalarField f;
    muskat::ScalarField beta;
};

Case make_case(int dim, int points) {
    const muskat::GridSpec grid(dim, points, 20.0);
    muskat::FieldRecipe bump;
    bump.kind = muskat::FieldKind::gaussian_bump;
    bump.amplitude = 0.5;
    bump.width = 1.5;
    return {grid, muskat::make_field(grid, bump), muskat::random_smooth_field(grid, 7)};
}

muskat::OperatorSpec riesz_spec(int dim) { return {muskat::base_profile(dim), 0, muskat::unit_index(0)}; }

void BM_apply_B(benchmark::State& state) {
    const Case c = make_case(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto spec = riesz_spec(c.grid.dim);
    for (auto _ : state) benchmark::DoNotOptimize(muskat::apply_B(spec, {c.f}, {}, c.beta));
}

void BM_apply_B_reference(benchmark::State& state) {
    const Case c = make_case(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto spec = riesz_spec(c.grid.dim);
    for (auto _ : state) benchmark::DoNotOptimize(muskat::reference::apply_B(spec, {c.f}, {}, c.beta));
}

void BM_apply_D(benchmark::State& state) {
    const Case c = make_case(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const muskat::InterfaceGeometry geom(c.f);
    for (auto _ : state) benchmark::DoNotOptimize(muskat::apply_D(geom, c.beta));
}

void BM_apply_D_reference(benchmark::State& state) {
    const Case c = make_case(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const muskat::InterfaceGeometry geom(c.f);
    for (auto _ : state) benchmark::DoNotOptimize(muskat::reference::apply_D(geom, c.beta));
}

}  // namespace

BENCHMARK(BM_apply_B)->Args({1, 512})->Args({2, 32})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_B_reference)->Args({1, 512})->Args({2, 32})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_D)->Args({1, 512})->Args({2, 32})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_D_reference)->Args({1, 512})->Args({2, 32})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
