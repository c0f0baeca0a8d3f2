#include <benchmark/benchmark.h>

#include <weakmax/bounds.hpp>
#include <weakmax/domain.hpp>
#include <weakmax/dyadic.hpp>
#include <weakmax/extremal.hpp>
#include <weakmax/profile.hpp>

#include <random>
#include <vector>

namespace {

using namespace weakmax;

const Exponents kEx(3.0, 2.0);

GridFunction random_grid(int level, int branching) {
    std::size_t cells = 1;
    for (int i = 0; i < level; ++i) cells *= static_cast<std::size_t>(branching);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(cells);
    for (auto& x : v) x = dist(rng);
    return GridFunction(level, branching, std::move(v));
}

void BM_gamma(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(gamma(kEx));
}
BENCHMARK(BM_gamma);

void BM_solve_k(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(solve_k(0.5, 0.3, 1.0, kEx));
}
BENCHMARK(BM_solve_k);

void BM_t1(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(t1(0.5, 0.3, 1.0, kEx));
}
BENCHMARK(BM_t1);

void BM_t_scaled(benchmark::State& state) {
    ConstraintTriple c(1.0, 1.2, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(t_scaled(kEx, c, 2.0));
}
BENCHMARK(BM_t_scaled);

void BM_two_piece(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(construct_two_piece(0.5, 0.3, 0.9, kEx));
}
BENCHMARK(BM_two_piece);

void BM_extremizer_for(benchmark::State& state) {
    for (auto _ : state) {
        auto [g, rec] = extremizer_for(0.5, 0.3, 1.0, kEx);
        benchmark::DoNotOptimize(rec);
    }
}
BENCHMARK(BM_extremizer_for);

void BM_discretize(benchmark::State& state) {
    auto [g, rec] = extremizer_for(0.5, 0.3, 1.0, kEx);
    for (auto _ : state)
        benchmark::DoNotOptimize(discretize(g, static_cast<int>(state.range(0))));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_discretize)->Arg(8)->Arg(12)->Arg(16);

void BM_maximal_operator(benchmark::State& state) {
    int level = static_cast<int>(state.range(0));
    TreeSpec tree(2, level);
    GridFunction phi = random_grid(level, 2);
    for (auto _ : state) benchmark::DoNotOptimize(maximal_operator(phi, tree));
    state.SetComplexityN(1 << level);
}
BENCHMARK(BM_maximal_operator)->Arg(8)->Arg(12)->Arg(16)->Complexity(benchmark::oN);

void BM_transplant(benchmark::State& state) {
    TreeSpec tree(2, 14);
    auto [g, rec] = extremizer_for(0.5, 0.3, 1.0, kEx);
    for (auto _ : state)
        benchmark::DoNotOptimize(transplant(g, rec.alpha, 1.0, tree));
}
BENCHMARK(BM_transplant);

void BM_verify_sharpness(benchmark::State& state) {
    ConstraintTriple c(0.5, 0.3, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_sharpness(kEx, c, 1.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_verify_sharpness)->Arg(10)->Arg(14);

}  // namespace

BENCHMARK_MAIN();
