#include "idgame/equilibrium.hpp"
#include "idgame/simulator.hpp"

#include <benchmark/benchmark.h>

using namespace idgame;

namespace {

const auto mf = mean_field_from_spec({});
const auto power = SupplyCurve::power_law(0.15, 1.2e5, 1.5);
const UncertaintyModel base{10'000, 6.0, 80'000, 120'000};

void BM_ExpectedExcessQuadrature(benchmark::State& state) {
    const Quadrature q{static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(expected_excess(0.12, mf, base, q));
}
BENCHMARK(BM_ExpectedExcessQuadrature)->Arg(33)->Arg(129)->Arg(513);

void BM_ExpectedExcessMonteCarlo(benchmark::State& state) {
    const MonteCarlo mc{static_cast<std::size_t>(state.range(0)), 1};
    for (auto _ : state) benchmark::DoNotOptimize(expected_excess(0.12, mf, base, mc));
}
BENCHMARK(BM_ExpectedExcessMonteCarlo)->Arg(10'000)->Arg(100'000);

void BM_SolveEquilibrium(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(solve_equilibrium(mf, power, base, Quadrature{}));
}
BENCHMARK(BM_SolveEquilibrium);

void BM_SolveNaive(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(solve_naive(mf, power, base));
}
BENCHMARK(BM_SolveNaive);

void BM_RunSlot(benchmark::State& state) {
    SlotConfig cfg;
    cfg.samples = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_slot(cfg, PopulationSpec{}));
}
BENCHMARK(BM_RunSlot)->Arg(1'000)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_MeritOrderClearing(benchmark::State& state) {
    const PopulationSpec spec{};
    const auto agents = sample_agents(spec, 1);
    const auto sol = solve_equilibrium(mf, power, base, Quadrature{});
    const auto dist = redispatch_distribution(sol.u_d, mf, base, Quadrature{});
    std::vector<Bid> bids;
    for (const auto& a : agents) bids.push_back(optimal_bid(a.utility, a.e_max, dist));
    for (auto _ : state) benchmark::DoNotOptimize(clear_finite_population(agents, bids, base.d0, power));
}
BENCHMARK(BM_MeritOrderClearing)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
