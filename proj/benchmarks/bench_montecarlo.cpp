// Compares the OpenMP simulation kernel against the serial reference
// implementation across trial counts and worker counts.

#include <benchmark/benchmark.h>

#include "cran/channel.hpp"
#include "cran/mcs.hpp"
#include "cran/montecarlo.hpp"

namespace {

cran::montecarlo::SimConfig make_config(std::uint64_t n_trials) {
    cran::montecarlo::SimConfig sim;
    sim.params = {};
    sim.table = cran::mcs::make_equally_spaced_table(27, -6.4, 17.6, 0.2);
    sim.margin = 1.0;
    sim.channel = cran::channel::ChannelSpec{cran::channel::FixedRayleigh{10.0}};
    sim.eps_hat = 0.1;
    sim.n_c = 10;
    sim.n_trials = n_trials;
    sim.seed = 42;
    return sim;
}

void bm_serial(benchmark::State& state) {
    const auto sim = make_config(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cran::montecarlo::run_serial(sim));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_parallel(benchmark::State& state) {
    const auto sim = make_config(static_cast<std::uint64_t>(state.range(0)));
    const int workers = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cran::montecarlo::run(sim, workers));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(bm_serial)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_parallel)
    ->Args({100000, 2})
    ->Args({100000, 4})
    ->Args({1000000, 2})
    ->Args({1000000, 4})
    ->Args({1000000, 0})  // 0 = runtime default worker count
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
