#include <benchmark/benchmark.h>

#include "ionxxz/couplings.hpp"
#include "ionxxz/exponents.hpp"
#include "ionxxz/rg_flow.hpp"
#include "ionxxz/spin_sim.hpp"
#include "ionxxz/trap.hpp"

using namespace ionxxz;

namespace {

ModelSpec chain(int sites, double sigma, double lambda) {
    ModelSpec m;
    m.sites = sites;
    m.sigma = sigma;
    m.lambda = lambda;
    return m;
}

void BM_equilibrium(benchmark::State& state) {
    TrapSpec spec;
    spec.ion_count = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_equilibrium(spec));
}
BENCHMARK(BM_equilibrium)->Arg(10)->Arg(20)->Arg(50);

void BM_modes(benchmark::State& state) {
    TrapSpec spec;
    spec.ion_count = static_cast<int>(state.range(0));
    const IonChain c = solve_equilibrium(spec);
    for (auto _ : state) benchmark::DoNotOptimize(longitudinal_modes(c));
}
BENCHMARK(BM_modes)->Arg(10)->Arg(30);

void BM_couplings(benchmark::State& state) {
    TrapSpec spec;
    spec.ion_count = static_cast<int>(state.range(0));
    const IonChain c = solve_equilibrium(spec);
    const PhononSpectrum s = longitudinal_modes(c);
    BeamParams beam;
    beam.detuning = 0.8;
    for (auto _ : state) {
        const CouplingMatrix m = effective_couplings(c, s, beam);
        benchmark::DoNotOptimize(fit_power_law(m));
    }
}
BENCHMARK(BM_couplings)->Arg(10)->Arg(20);

void BM_detuning_sweep(benchmark::State& state) {
    TrapSpec spec;
    spec.ion_count = 10;
    SweepOptions opt;
    opt.points = 50;
    for (auto _ : state)
        benchmark::DoNotOptimize(detuning_sweep(spec, ChainMode::equidistant, {}, opt));
}
BENCHMARK(BM_detuning_sweep);

void BM_lattice_dispersion(benchmark::State& state) {
    ModelSpec model;
    model.sigma = 2.3;
    for (auto _ : state) benchmark::DoNotOptimize(magnon_dispersion(0.01, model));
}
BENCHMARK(BM_lattice_dispersion);

void BM_prefactor(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(prefactor_D(2.3, 1.0, 0.5));
}
BENCHMARK(BM_prefactor);

void BM_rg_integrate(benchmark::State& state) {
    RGState start;
    start.g_tilde = 0.2;
    start.mu_tilde = 1e-4;
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_flow(start, 0.3, 1.3, 3.14159265358979324, -20.0));
}
BENCHMARK(BM_rg_integrate);

void BM_sector_scan(benchmark::State& state) {
    const ModelSpec m = chain(static_cast<int>(state.range(0)), 2.3, 0.0);
    std::vector<double> fields{0.0, 0.3, 0.6, 0.9, 1.2};
    for (auto _ : state) benchmark::DoNotOptimize(ground_state_scan(m, fields));
}
BENCHMARK(BM_sector_scan)->Arg(8)->Arg(10)->Arg(12);

void BM_quench(benchmark::State& state) {
    const ModelSpec m = chain(static_cast<int>(state.range(0)), 2.3, 0.5);
    QuenchProtocol p;
    p.rate = 0.5;
    p.tolerance = 1e-6;
    p.final_fidelity = false;
    for (auto _ : state) benchmark::DoNotOptimize(quench_evolve(m, p));
}
BENCHMARK(BM_quench)->Arg(6)->Arg(8);

} // namespace

BENCHMARK_MAIN();
