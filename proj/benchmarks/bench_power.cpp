#include <benchmark/benchmark.h>

#include "noma/channel.hpp"
#include "noma/matching.hpp"
#include "noma/power.hpp"
#include "noma/rates.hpp"

using namespace noma;

namespace {

struct Fixture {
    Scenario scen;
    Assignment asg;

    explicit Fixture(int users = 40, int scs = 20) {
        CellConfig cell;
        ScenarioParams params;
        params.num_users = users;
        params.num_subchannels = scs;
        params.max_users_per_sc = 4;
        params.seed = 11;
        scen = build_scenario(cell, params);
        asg = run_matching(scen).assignment;
    }
};

void BM_joint_gp(benchmark::State& state) {
    const Fixture f;
    PowerOptions opts;
    opts.eps = 1e-3;
    opts.max_outer = 25;
    opts.inner_tol = 1e-6;
    for (auto _ : state) benchmark::DoNotOptimize(joint_gp_allocate(f.asg, f.scen, opts));
}
BENCHMARK(BM_joint_gp)->Unit(benchmark::kMillisecond);

void BM_greedy_eem(benchmark::State& state) {
    const Fixture f;
    for (auto _ : state)
        benchmark::DoNotOptimize(greedy_eem_allocate(f.asg, f.scen, f.scen.p_max_w / 100.0));
}
BENCHMARK(BM_greedy_eem)->Unit(benchmark::kMillisecond);

void BM_subchannel_ee_solve(benchmark::State& state) {
    const Fixture f(8, 2);
    SubchannelEeProblem prob;
    const auto& mem = f.asg.members(0);
    for (int m : mem) prob.member_gains.push_back(f.scen.gain(m, 0));
    prob.gamma = ftpa_weights(prob.member_gains, f.scen.ftpa_alpha);
    prob.p_c = f.scen.p_c_w;
    prob.noise = 1.0;
    prob.p_cap = f.scen.p_max_w;
    prob.p_init = f.scen.equal_split_power();
    for (auto _ : state) benchmark::DoNotOptimize(solve_subchannel_ee(prob));
}
BENCHMARK(BM_subchannel_ee_solve);

void BM_per_sc_gp(benchmark::State& state) {
    const Fixture f;
    int sc = 0;
    while (f.asg.members(sc).empty()) ++sc;
    PowerOptions opts;
    opts.lean = true;
    opts.eps = 1e-1;
    opts.max_outer = 2;
    opts.inner_tol = 1e-2;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            per_sc_gp_allocate(sc, f.asg.members(sc), f.scen.equal_split_power(), f.scen, opts));
}
BENCHMARK(BM_per_sc_gp);

void BM_baseline_full_power(benchmark::State& state) {
    const Fixture f;
    for (auto _ : state) benchmark::DoNotOptimize(baseline_full_power(f.asg, f.scen));
}
BENCHMARK(BM_baseline_full_power);

}  // namespace
