#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "noma/gp.hpp"
#include "noma/rng.hpp"

using namespace noma::gp;

namespace {

Posynomial random_posynomial(noma::Rng& rng, int dim, int terms) {
    Posynomial p;
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        m.coeff = std::exp(rng.uniform(-1.0, 1.0));
        m.exponents.resize(dim);
        for (auto& e : m.exponents) e = rng.uniform(-2.0, 2.0);
        p += m;
    }
    return p;
}

void BM_condense(benchmark::State& state) {
    noma::Rng rng(7);
    const int dim = 4;
    const Posynomial p = random_posynomial(rng, dim, static_cast<int>(state.range(0)));
    const std::vector<double> q0(dim, 1.3);
    for (auto _ : state) benchmark::DoNotOptimize(condense(p, q0));
}
BENCHMARK(BM_condense)->Arg(5)->Arg(50)->Arg(500);

void BM_evaluate(benchmark::State& state) {
    noma::Rng rng(9);
    const int dim = 4;
    const Posynomial p = random_posynomial(rng, dim, static_cast<int>(state.range(0)));
    const std::vector<double> q(dim, 0.8);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(p, q));
}
BENCHMARK(BM_evaluate)->Arg(5)->Arg(50)->Arg(500);

void BM_solve_gp_small(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    GpProblem prob;
    prob.dimension = dim;
    Posynomial obj = Posynomial::variable(0, dim);
    for (int i = 1; i < dim; ++i) obj += Posynomial::variable(i, dim).terms[0];
    prob.objective = obj;
    Monomial floor{1.0, std::vector<double>(dim, -1.0)};  // 1/prod(q) <= 1
    prob.constraints.push_back(RatioConstraint::upper_bound(Posynomial{{floor}}));
    prob.lower.assign(dim, 0.1);
    prob.upper.assign(dim, 10.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_gp(prob, 1e-6));
}
BENCHMARK(BM_solve_gp_small)->Arg(2)->Arg(4)->Arg(8);

void BM_solve_condensation_ratio(benchmark::State& state) {
    noma::Rng rng(13);
    const int dim = 2;
    GpProblem prob;
    prob.dimension = dim;
    prob.objective = PosyRatio{random_posynomial(rng, dim, 4), random_posynomial(rng, dim, 4)};
    prob.lower.assign(dim, 0.1);
    prob.upper.assign(dim, 10.0);
    const std::vector<double> q0(dim, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_condensation(prob, q0));
}
BENCHMARK(BM_solve_condensation_ratio);

}  // namespace
