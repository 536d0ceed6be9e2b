#include <benchmark/benchmark.h>

#include "noma/channel.hpp"
#include "noma/matching.hpp"

using namespace noma;

namespace {

Scenario bench_scenario(int users, int scs, int k, std::uint64_t seed) {
    CellConfig cell;
    ScenarioParams params;
    params.num_users = users;
    params.num_subchannels = scs;
    params.max_users_per_sc = k;
    params.seed = seed;
    return build_scenario(cell, params);
}

void BM_matching_ftpa(benchmark::State& state) {
    const Scenario s =
        bench_scenario(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 4, 5);
    for (auto _ : state) benchmark::DoNotOptimize(run_matching(s));
}
BENCHMARK(BM_matching_ftpa)->Args({20, 10})->Args({40, 20});

void BM_matching_gp_eval(benchmark::State& state) {
    const Scenario s =
        bench_scenario(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 4, 5);
    MatchingOptions opts;
    opts.eval = RateEval::per_sc_gp;
    opts.gp.lean = true;
    opts.gp.eps = 1e-1;
    opts.gp.max_outer = 2;
    opts.gp.inner_tol = 1e-2;
    for (auto _ : state) benchmark::DoNotOptimize(run_matching(s, opts));
}
BENCHMARK(BM_matching_gp_eval)->Args({20, 10})->Args({40, 20})->Unit(benchmark::kMillisecond);

void BM_matching_one_to_many(benchmark::State& state) {
    const Scenario s = bench_scenario(40, 20, 4, 5);
    MatchingOptions opts;
    opts.user_quota = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run_matching(s, opts));
}
BENCHMARK(BM_matching_one_to_many);

}  // namespace
