// Serial reference vs OpenMP/FFTW kernels on headline-sized grids.
//
//   bench_kernels --benchmark_filter=apply_columns
//
// Arguments are {Nx, Ny}. HYPRANDTL_WORKERS sets the thread count.

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "hyprandtl/dynamics.hpp"
#include "hyprandtl/kernels.hpp"
#include "hyprandtl/norms.hpp"

using namespace hyprandtl;

namespace {

std::vector<double> noise(std::size_t n) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> N;
    std::vector<double> v(n);
    for (auto& x : v) x = N(rng);
    return v;
}

void apply_columns_serial(benchmark::State& st) {
    auto g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const auto in = noise(g->size());
    std::vector<double> out(g->size());
    for (auto _ : st) {
        kernels::serial::apply_columns(g->Dy(), in, out, g->Nx());
        benchmark::DoNotOptimize(out.data());
    }
}

void apply_columns_parallel(benchmark::State& st) {
    auto g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const auto in = noise(g->size());
    std::vector<double> out(g->size());
    for (auto _ : st) {
        kernels::parallel::apply_columns(g->Dy(), in, out, g->Nx());
        benchmark::DoNotOptimize(out.data());
    }
}

void forward_x_serial(benchmark::State& st) {
    auto g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const auto in = noise(g->size());
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(g->Nx() / 2 + 1) * static_cast<std::size_t>(g->Ny()));
    for (auto _ : st) {
        kernels::serial::forward_x(in, spec, g->Nx(), g->Ny());
        benchmark::DoNotOptimize(spec.data());
    }
}

void forward_x_parallel(benchmark::State& st) {
    auto g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const auto in = noise(g->size());
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(g->Nx() / 2 + 1) * static_cast<std::size_t>(g->Ny()));
    for (auto _ : st) {
        kernels::parallel::forward_x(g->plans(), in, spec, g->Nx(), g->Ny());
        benchmark::DoNotOptimize(spec.data());
    }
}

std::vector<std::complex<double>> spectrum_of(const GridPtr& g) {
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(g->Nx() / 2 + 1) * static_cast<std::size_t>(g->Ny()));
    kernels::serial::forward_x(noise(g->size()), spec, g->Nx(), g->Ny());
    return spec;
}

void inverse_x_serial(benchmark::State& st) {
    auto g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const auto spec = spectrum_of(g);
    std::vector<double> out(g->size());
    for (auto _ : st) {
        kernels::serial::inverse_x(spec, out, g->Nx(), g->Ny());
        benchmark::DoNotOptimize(out.data());
    }
}

void inverse_x_parallel(benchmark::State& st) {
    auto g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const auto spec = spectrum_of(g);
    std::vector<double> out(g->size());
    for (auto _ : st) {
        kernels::parallel::inverse_x(g->plans(), spec, out, g->Nx(), g->Ny());
        benchmark::DoNotOptimize(out.data());
    }
}

void mode_energies_serial(benchmark::State& st) {
    auto g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const auto spec = spectrum_of(g);
    std::vector<double> e(static_cast<std::size_t>(g->Nx() / 2 + 1));
    for (auto _ : st) {
        kernels::serial::mode_energies(spec, g->quad_weights(), g->Nx() / 2 + 1, g->Ny(), e);
        benchmark::DoNotOptimize(e.data());
    }
}

void mode_energies_parallel(benchmark::State& st) {
    auto g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const auto spec = spectrum_of(g);
    std::vector<double> e(static_cast<std::size_t>(g->Nx() / 2 + 1));
    for (auto _ : st) {
        kernels::parallel::mode_energies(spec, g->quad_weights(), g->Nx() / 2 + 1, g->Ny(), e);
        benchmark::DoNotOptimize(e.data());
    }
}

// End to end: one RK4 step of the headline configuration.
void rk4_step_headline(benchmark::State& st) {
    auto g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), 40.0);
    const auto u0 = ScalarField::sample(g, [](double x, double y) { return 1e-3 * std::sin(x) * y * std::exp(-0.5 * y * y); });
    auto s = make_initial_state(u0, ScalarField(g), 1.0);
    for (auto _ : st) {
        auto next = rk4_step(s, 1e-3);
        benchmark::DoNotOptimize(next.u.raw().data());
    }
}

void shapes(benchmark::internal::Benchmark* b) {
    for (auto [nx, ny] : {std::pair{32, 48}, std::pair{64, 96}, std::pair{128, 128}}) b->Args({nx, ny});
}

}  // namespace

BENCHMARK(apply_columns_serial)->Apply(shapes);
BENCHMARK(apply_columns_parallel)->Apply(shapes)->UseRealTime();
BENCHMARK(forward_x_serial)->Apply(shapes);
BENCHMARK(forward_x_parallel)->Apply(shapes)->UseRealTime();
BENCHMARK(inverse_x_serial)->Apply(shapes);
BENCHMARK(inverse_x_parallel)->Apply(shapes)->UseRealTime();
BENCHMARK(mode_energies_serial)->Apply(shapes);
BENCHMARK(mode_energies_parallel)->Apply(shapes)->UseRealTime();
BENCHMARK(rk4_step_headline)->Args({64, 96})->UseRealTime();

BENCHMARK_MAIN();
