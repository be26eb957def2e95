#include <benchmark/benchmark.h>

#include <random>

#include "cla/multivector.hpp"

namespace {

cla::Multivector random_mv(int dim, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    cla::Multivector m(dim);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = u(rng);
    return m;
}

void BM_GeometricProduct(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    std::mt19937 rng(7);
    auto a = random_mv(dim, rng);
    auto b = random_mv(dim, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(a * b);
    }
}

}  // namespace

BENCHMARK(BM_GeometricProduct)->Arg(2)->Arg(4)->Arg(6)->Arg(8);

BENCHMARK_MAIN();
