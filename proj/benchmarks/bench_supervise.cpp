#include <benchmark/benchmark.h>

#include <cstdlib>

#include "hypercomp/supervise.hpp"

namespace sv = hypercomp::supervise;

namespace {

// 585 training rows is the 75% split of the largest dataset
void BM_KernelRidgeFitPredict(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const auto d = static_cast<Eigen::Index>(state.range(1));
    std::srand(4);
    const sv::Matrix x = sv::Matrix::Random(n, d), q = sv::Matrix::Random(n / 3, d);
    const sv::Vector y = sv::Vector::Random(n);
    for (auto _ : state) {
        sv::KernelRidge kr(1.0);
        kr.fit(x, y);
        benchmark::DoNotOptimize(kr.predict(q).data());
    }
}
BENCHMARK(BM_KernelRidgeFitPredict)->Args({585, 900})->Args({585, 150})->Unit(benchmark::kMillisecond);

void BM_PlsFitPredict(benchmark::State& state) {
    std::srand(5);
    const sv::Matrix x = sv::Matrix::Random(585, 150), q = sv::Matrix::Random(195, 150);
    const sv::Vector y = sv::Vector::Random(585);
    for (auto _ : state) {
        sv::Pls pls(static_cast<int>(state.range(0)));
        pls.fit(x, y);
        benchmark::DoNotOptimize(pls.predict(q).data());
    }
}
BENCHMARK(BM_PlsFitPredict)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
