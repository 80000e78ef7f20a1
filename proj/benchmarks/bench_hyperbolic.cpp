#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hypercomp/hyperbolic.hpp"

namespace hc = hypercomp::hyperbolic;

namespace {

std::vector<double> point(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> r(0.0, 0.95);
    std::vector<double> p(dim);
    double n = 0;
    for (auto& x : p) {
        x = g(rng);
        n += x * x;
    }
    const double s = r(rng) / std::sqrt(n);
    for (auto& x : p) x *= s;
    return p;
}

void BM_PoincareDistance(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto dim = static_cast<std::size_t>(state.range(0));
    const auto x = point(rng, dim), y = point(rng, dim);
    for (auto _ : state) benchmark::DoNotOptimize(hc::poincare_distance(x, y));
}
BENCHMARK(BM_PoincareDistance)->Arg(5)->Arg(50)->Arg(200);

// a two-level tree: `fanout` mids under one root, `fanout` leaves under each mid
std::vector<std::pair<std::string, std::string>> tree(int fanout) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (int m = 0; m < fanout; ++m) {
        const auto mid = "m" + std::to_string(m);
        edges.emplace_back(mid, "root");
        for (int l = 0; l < fanout; ++l) edges.emplace_back("l" + std::to_string(m) + "_" + std::to_string(l), mid);
    }
    return edges;
}

void BM_TrainingEpoch(benchmark::State& state) {
    const auto edges = tree(static_cast<int>(state.range(0)));
    hc::TrainConfig cfg;
    cfg.dim = 50;
    hc::Trainer trainer(edges, cfg);
    int epoch = 0;
    for (auto _ : state) benchmark::DoNotOptimize(trainer.run_epoch(epoch++));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(edges.size()));
}
BENCHMARK(BM_TrainingEpoch)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace
