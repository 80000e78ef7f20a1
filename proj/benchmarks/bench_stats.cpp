#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "hypercomp/stats.hpp"

namespace {

void BM_Spearman(benchmark::State& state) {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> tie(0, 20);
    std::vector<double> a(static_cast<std::size_t>(state.range(0))), b(a.size());
    for (auto& x : a) x = tie(rng);
    for (auto& x : b) x = tie(rng);
    for (auto _ : state) benchmark::DoNotOptimize(hypercomp::stats::spearman(a, b));
}
BENCHMARK(BM_Spearman)->Arg(90)->Arg(1042)->Arg(100000);

void BM_Wilcoxon(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> a(static_cast<std::size_t>(state.range(0))), b(a.size());
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng);
    for (auto _ : state) benchmark::DoNotOptimize(hypercomp::stats::wilcoxon_signed_rank(a, b).p);
}
BENCHMARK(BM_Wilcoxon)->Arg(25)->Arg(1000);

}  // namespace
