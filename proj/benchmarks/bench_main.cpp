#include <benchmark/benchmark.h>

#include "corrlab/corrlab.hpp"

using namespace corrlab;

static void BM_propagate(benchmark::State& st) {
    LatticeSpec l;
    l.sites = static_cast<int>(st.range(0));
    l.dt = 0.05;
    HamiltonianSpec hs;
    hs.kind = HamiltonianKind::harmonic;
    LatticeHamiltonian h(hs, l);
    Propagator p(h, l.dt);
    auto psi = make_gaussian(l, l.spacing * (l.sites - 1) / 2.0, 2.0, 0.3);
    for (auto _ : st) benchmark::DoNotOptimize(propagate(psi, p, 100));
    st.SetItemsProcessed(st.iterations() * 100);
}
BENCHMARK(BM_propagate)->Arg(8)->Arg(32)->Arg(128);

static void BM_bruteforce(benchmark::State& st) {
    auto c = default_config(ExperimentKind::time_symmetry);
    LatticeHamiltonian h(c.hamiltonian, c.lattice);
    auto A = make_gaussian(c.lattice, 0.5, 1.0, 0.3);
    Propagator p(h, c.lattice.dt);
    BoundaryPair pair{A, p.step(p.step(A)), 0, 2};
    AmplitudeGrid g{static_cast<int>(st.range(0)), 8};
    CorrelatorOptions o;
    o.threads = 1;
    for (auto _ : st) benchmark::DoNotOptimize(correlator_bruteforce(pair, h, g, o));
    st.SetItemsProcessed(st.iterations() * static_cast<long>(bruteforce_points(pair, c.lattice.sites, g)));
}
BENCHMARK(BM_bruteforce)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_fluctuation(benchmark::State& st) {
    auto c = default_config(ExperimentKind::alpha_scaling);
    LatticeHamiltonian h(c.hamiltonian, c.lattice);
    Propagator p(h, c.lattice.dt);
    auto hist = propagate(make_gaussian(c.lattice, 1.0, 0.8, 0.3), p, c.lattice.time_slices - 1);
    auto ex = action_expansion(hist, h);
    const double rho = default_radius(c.lattice, 0.25);
    for (auto _ : st) benchmark::DoNotOptimize(fluctuation_log_magnitude(ex, 1e-3, rho));
}
BENCHMARK(BM_fluctuation);

static void BM_fluctuation_quadrature(benchmark::State& st) {
    auto c = default_config(ExperimentKind::alpha_scaling);
    LatticeHamiltonian h(c.hamiltonian, c.lattice);
    Propagator p(h, c.lattice.dt);
    auto hist = propagate(make_gaussian(c.lattice, 1.0, 0.8, 0.3), p, c.lattice.time_slices - 1);
    auto ex = action_expansion(hist, h);
    const double rho = default_radius(c.lattice, 0.25);
    for (auto _ : st) benchmark::DoNotOptimize(fluctuation_quadrature(ex, 10.0, rho, static_cast<int>(st.range(0)), 1e-3));
}
BENCHMARK(BM_fluctuation_quadrature)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
