#include "vsg/evolution.hpp"
#include "vsg/initial_data.hpp"

#include <benchmark/benchmark.h>

using namespace vsg;

namespace {

State two_mode(const SpectralGrid& g) {
    InitialSpec spec;
    spec.kind = "two_mode";
    spec.amplitude = 0.1;
    return make_initial_state(g, spec);
}

}  // namespace

static void BM_ForwardTransform(benchmark::State& st) {
    const SpectralGrid g(2, static_cast<int>(st.range(0)));
    const RealField f = inverse_transform(two_mode(g).F_hat());
    for (auto _ : st) benchmark::DoNotOptimize(forward_transform(f));
    st.SetItemsProcessed(st.iterations() * static_cast<long>(g.points()));
}
BENCHMARK(BM_ForwardTransform)->Arg(32)->Arg(64)->Arg(128);

static void BM_InverseTransform(benchmark::State& st) {
    const SpectralGrid g(2, static_cast<int>(st.range(0)));
    const SpectralField F = two_mode(g).F_hat();
    for (auto _ : st) benchmark::DoNotOptimize(inverse_transform(F));
    st.SetItemsProcessed(st.iterations() * static_cast<long>(g.points()));
}
BENCHMARK(BM_InverseTransform)->Arg(32)->Arg(64)->Arg(128);

static void BM_RhsNonlinear(benchmark::State& st) {
    const SpectralGrid g(2, static_cast<int>(st.range(0)));
    const State s = two_mode(g);
    const auto m = EnergyModel::double_well(2);
    for (auto _ : st) benchmark::DoNotOptimize(rhs_nonlinear(s, m, DealiasRule::two_thirds));
}
BENCHMARK(BM_RhsNonlinear)->Arg(32)->Arg(64)->Arg(128);

static void BM_Step(benchmark::State& st) {
    SolverConfig c;
    c.grid = SpectralGrid(2, static_cast<int>(st.range(0)));
    c.nu = 0.1;
    c.delta = 0.01;
    c.dt = 5e-4;
    c.scheme = st.range(1) ? Scheme::exponential_midpoint : Scheme::imex_cnab2;
    Stepper stepper(c);
    State s = two_mode(c.grid);
    for (auto _ : st) s = stepper.step(s);
    benchmark::DoNotOptimize(s);
}
BENCHMARK(BM_Step)->Args({64, 0})->Args({64, 1})->Args({128, 0})->Args({128, 1});

BENCHMARK_MAIN();
