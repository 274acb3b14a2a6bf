#include <benchmark/benchmark.h>

#include "sbs/analytics.hpp"
#include "sbs/design.hpp"
#include "sbs/propagator.hpp"
#include "sbs/sweep.hpp"

namespace {

sbs::WaveguideParams params() {
    sbs::WaveguideParams p;
    p.g = 1e6;
    p.gamma = 1e8;
    p.v_g = 1e8;
    p.length = 1e-2;
    p.omega_phonon = 5e10;
    p.n_bar = sbs::thermal_occupation(p.omega_phonon, 0.1);
    return p;
}

sbs::DualPumpConfig dual() {
    sbs::DualPumpConfig d;
    d.upper = {2.5e5, 0.5, sbs::PumpRole::upper};
    d.lower = {1e6, 2.0, sbs::PumpRole::lower};
    d.a = 0.25;
    d.b = 0.25;
    return d;
}

void bm_dual_response(benchmark::State& state) {
    const auto p = params();
    const auto d = dual();
    for (auto _ : state)
        benchmark::DoNotOptimize(sbs::analytics::dual_response(p, d));
}
BENCHMARK(bm_dual_response);

void bm_balance_detuning(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(sbs::design::balance_detuning(0.25, 0.25));
}
BENCHMARK(bm_balance_detuning);

void bm_propagate_full(benchmark::State& state) {
    const auto p = params();
    const auto d = dual();
    const int nz = static_cast<int>(state.range(0));
    const auto grid = sbs::prop::Grid::make(p, nz, 4e-8);
    sbs::prop::PulseSpec pulse;
    pulse.sigma_t = 2e-9;
    pulse.t_center = 1e-8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sbs::prop::propagate_mean_field(p, d, pulse, grid, sbs::prop::Mode::full));
    }
    state.SetItemsProcessed(state.iterations() * grid.nt * nz);
}
BENCHMARK(bm_propagate_full)->Arg(64)->Arg(256);

void bm_sweep_row(benchmark::State& state) {
    const auto p = params();
    const auto d = dual();
    sbs::sweep::SweepSpec spec;
    spec.axis = sbs::sweep::Axis::intensity_ratio;
    spec.from = 0.1;
    spec.to = 0.9;
    spec.points = 65;
    spec.balance = sbs::sweep::BalanceMode::hold_zero_gain;
    for (auto _ : state)
        benchmark::DoNotOptimize(sbs::sweep::sweep(p, d, spec));
    state.SetItemsProcessed(state.iterations() * spec.points);
}
BENCHMARK(bm_sweep_row);

} // namespace

BENCHMARK_MAIN();
